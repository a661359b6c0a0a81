#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coab {

struct TokenizerConfig {
  bool lowercase = true;
  // Default rule: whitespace split with leading/trailing ASCII punctuation
  // detached as their own tokens. false = plain whitespace split.
  bool detach_punctuation = true;
  // When set (>= 2), ingestion additionally registers every contiguous
  // n-token subsequence of each sentence.
  std::optional<std::uint32_t> window;
};

struct TokenizeResult {
  std::vector<std::string> tokens;
  std::uint64_t invalid_bytes = 0;  // bytes replaced by U+FFFD
};

// Deterministic; an empty line yields no tokens. Ill-formed UTF-8 bytes are
// replaced and counted, never fatal.
TokenizeResult tokenize(std::string_view line, const TokenizerConfig& config);

}  // namespace coab
