#include "coab/tokenizer.hpp"

#include <cctype>

namespace coab {

namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }
bool is_ascii_punct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

// Structural UTF-8 scan: replaces every byte that cannot start or continue a
// well-formed sequence with U+FFFD.
std::string sanitize_utf8(std::string_view in, std::uint64_t& replaced) {
  static constexpr const char* kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    std::size_t len = 0;
    if (c < 0x80)
      len = 1;
    else if ((c & 0xE0) == 0xC0)
      len = 2;
    else if ((c & 0xF0) == 0xE0)
      len = 3;
    else if ((c & 0xF8) == 0xF0)
      len = 4;
    if (len == 0) {
      out += kReplacement;
      ++replaced;
      ++i;
      continue;
    }
    if (i + len > in.size()) {
      out += kReplacement;
      ++replaced;
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(in[i + k]) & 0xC0) != 0x80) ok = false;
    if (!ok) {
      out += kReplacement;
      ++replaced;
      ++i;
      continue;
    }
    out.append(in.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace

TokenizeResult tokenize(std::string_view line, const TokenizerConfig& config) {
  TokenizeResult res;
  std::string text = sanitize_utf8(line, res.invalid_bytes);
  if (config.lowercase)
    for (char& c : text)
      if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  std::size_t i = 0;
  auto emit_word = [&](std::string_view word) {
    if (!config.detach_punctuation) {
      res.tokens.emplace_back(word);
      return;
    }
    std::size_t b = 0, e = word.size();
    std::size_t lead_end = b;
    while (lead_end < e && is_ascii_punct(static_cast<unsigned char>(word[lead_end]))) ++lead_end;
    if (lead_end == e) {
      // all punctuation: one token per character
      for (std::size_t k = b; k < e; ++k) res.tokens.emplace_back(1, word[k]);
      return;
    }
    std::size_t trail_begin = e;
    while (trail_begin > lead_end && is_ascii_punct(static_cast<unsigned char>(word[trail_begin - 1]))) --trail_begin;
    for (std::size_t k = b; k < lead_end; ++k) res.tokens.emplace_back(1, word[k]);
    res.tokens.emplace_back(word.substr(lead_end, trail_begin - lead_end));
    for (std::size_t k = trail_begin; k < e; ++k) res.tokens.emplace_back(1, word[k]);
  };

  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) emit_word(std::string_view(text).substr(start, i - start));
  }
  return res;
}

}  // namespace coab
