#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coab/tokenizer.hpp"

using namespace coab;

TEST_CASE("default tokenization lowercases and splits on whitespace") {
  auto res = tokenize("He is a good man", {});
  CHECK(res.tokens == std::vector<std::string>{"he", "is", "a", "good", "man"});
  CHECK(res.invalid_bytes == 0);
}

TEST_CASE("empty and blank lines yield no tokens") {
  CHECK(tokenize("", {}).tokens.empty());
  CHECK(tokenize("   \t  ", {}).tokens.empty());
}

TEST_CASE("punctuation is detached from word edges") {
  auto res = tokenize("Wait, he said: \"go!\"", {});
  CHECK(res.tokens == std::vector<std::string>{"wait", ",", "he", "said", ":", "\"", "go", "!", "\""});
  // interior punctuation stays put
  CHECK(tokenize("don't stop", {}).tokens == std::vector<std::string>{"don't", "stop"});
  CHECK(tokenize("...", {}).tokens == std::vector<std::string>{".", ".", "."});
}

TEST_CASE("whitespace-only mode keeps punctuation attached") {
  TokenizerConfig cfg;
  cfg.detach_punctuation = false;
  CHECK(tokenize("a man.", cfg).tokens == std::vector<std::string>{"a", "man."});
}

TEST_CASE("lowercase can be disabled") {
  TokenizerConfig cfg;
  cfg.lowercase = false;
  CHECK(tokenize("He IS", cfg).tokens == std::vector<std::string>{"He", "IS"});
}

TEST_CASE("tokenization is a fixpoint on its own joined output") {
  auto first = tokenize("The Quick    brown fox", {});
  std::string joined;
  for (std::size_t i = 0; i < first.tokens.size(); ++i) {
    if (i) joined += ' ';
    joined += first.tokens[i];
  }
  CHECK(tokenize(joined, {}).tokens == first.tokens);
}

TEST_CASE("invalid UTF-8 bytes are replaced and counted") {
  std::string bad = "ok \xFF\xFE then";
  auto res = tokenize(bad, {});
  CHECK(res.invalid_bytes == 2);
  REQUIRE(res.tokens.size() == 3);
  CHECK(res.tokens[0] == "ok");
  CHECK(res.tokens[1] == "\xEF\xBF\xBD\xEF\xBF\xBD");
  CHECK(res.tokens[2] == "then");

  // well-formed multibyte text passes through untouched
  auto good = tokenize("caf\xC3\xA9 bar", {});
  CHECK(good.invalid_bytes == 0);
  CHECK(good.tokens == std::vector<std::string>{"caf\xC3\xA9", "bar"});
}

TEST_CASE("truncated multibyte sequences are replaced byte by byte") {
  std::string bad = "x \xE2\x82";  // first two bytes of a three-byte sequence
  auto res = tokenize(bad, {});
  CHECK(res.invalid_bytes == 2);
}
