#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "coab/engine.hpp"
#include "coab/errors.hpp"
#include "coab/ingest.hpp"
#include "coab/model_io.hpp"

#include "oracles.hpp"
#include "synth.hpp"
#include "util.hpp"

using namespace coab;

TEST_CASE("ingesting a line registers tokens, the sentence, and abstractions") {
  Model m;
  m.assume_meaningful("test");
  IngestStats stats;
  auto sentence = ingest_line(m, "He is a good man", {}, stats);
  REQUIRE(sentence.has_value());
  CHECK(stats.tokens_registered == 5);
  CHECK(stats.sentences_registered == 1);
  CHECK(stats.concepts_derived == 6);  // within + 5 contexts
  CHECK(stats.abstractions_inserted == 5);
  CHECK(m.registry().get(*sentence).composition.elements.size() == 5);
  CHECK(m.registry().find_by_name("he is a good man") == *sentence);

  // re-ingesting the same line adds nothing
  IngestStats again;
  auto second = ingest_line(m, "He is a good man", {}, again);
  CHECK(second == sentence);
  CHECK(again.tokens_registered == 0);
  CHECK(again.sentences_registered == 0);
  CHECK(again.concepts_derived == 0);
  CHECK(again.abstractions_inserted == 0);
}

TEST_CASE("blank lines produce nothing; comments are skipped at corpus level") {
  Model m;
  IngestStats stats;
  CHECK(ingest_line(m, "   ", {}, stats) == std::nullopt);

  std::istringstream in("# a comment\nhello world\n\n");
  IngestStats s = ingest_corpus(m, in, {}, "c");
  CHECK(s.lines_read == 3);
  CHECK(s.sentences_registered == 1);
  CHECK(m.assumes("c"));
}

TEST_CASE("word-level ingestion reproduces the contextual-twin equivalence") {
  Model m = testutil::model_from_corpus({"He is a good man", "He is a bad man"});
  const Registry& reg = m.registry();
  OperationId good = testutil::op(m, "good");
  OperationId bad = testutil::op(m, "bad");

  Concept ctx = Concept::seq_context({testutil::op(m, "he"), testutil::op(m, "is"), testutil::op(m, "a"),
                                      OperationId{}, testutil::op(m, "man")});
  ConceptId c = testutil::cid(m, ctx);
  CHECK(extension(reg, ctx) == std::vector<OperationId>{good, bad});
  CHECK(contextual_relation(m, good, c) == std::vector<OperationId>{bad});
  CHECK(m.check().empty());
}

TEST_CASE("chunk-level spec ingestion supports the same queries") {
  Model m = testutil::model_from_spec(testutil::kNlpSpecTwo);
  OperationId good = testutil::op(m, "good");
  OperationId bad = testutil::op(m, "bad");
  ConceptId c2 = testutil::cid(m, Concept::seq_context({testutil::op(m, "he is a"), OperationId{},
                                                        testutil::op(m, "man")}));
  CHECK(contextual_relation(m, good, c2) == std::vector<OperationId>{bad});
  CHECK_THROWS_AS(contextual_relation(m, testutil::op(m, "man"), c2), NotSatisfiedError);
}

TEST_CASE("contextual relation through a singleton concept is empty") {
  Model m = testutil::model_from_corpus({"only line here"});
  OperationId only = testutil::op(m, "only");
  // the full-context concept holding "only" has a singleton extension
  Concept ctx = Concept::seq_context({OperationId{}, testutil::op(m, "line"), testutil::op(m, "here")});
  CHECK(contextual_relation(m, only, testutil::cid(m, ctx)).empty());
}

TEST_CASE("high-level contextual relation matches a shared-neighbor scan") {
  std::mt19937 rng(73);
  auto corpus = synth::phrase_corpus(rng, 30);
  Model m = testutil::model_from_corpus(corpus);
  const Registry& reg = m.registry();

  auto targets_of = [&](OperationId x) {
    std::set<TargetRef> t;
    for (const Relation& r : oracle::relations_of(reg, m.concepts(), m.abstractions(), x))
      t.insert(r.target);
    return t;
  };

  std::vector<OperationId> candidates = m.all_operations();
  OperationId lambda = testutil::op(m, "alice");
  OperationId sigma = testutil::op(m, "bob");
  auto got = contextual_relation(m, lambda, sigma);

  std::set<TargetRef> lam = targets_of(lambda), sig = targets_of(sigma);
  std::vector<OperationId> want;
  for (OperationId x : candidates) {
    if (x == lambda || x == sigma) continue;
    auto tx = targets_of(x);
    bool shares_lam = false, shares_sig = false;
    for (const TargetRef& t : tx) {
      if (lam.contains(t)) shares_lam = true;
      if (sig.contains(t)) shares_sig = true;
    }
    if (shares_lam && shares_sig) want.push_back(x);
  }
  CHECK(got == want);
  CHECK_FALSE(got.empty());  // phrase corpora share verbs/objects across subjects
}

TEST_CASE("every prefix of an ingestion sequence is consistent") {
  std::mt19937 rng(101);
  auto corpus = synth::phrase_corpus(rng, 10);
  Model m;
  m.assume_meaningful("c");
  for (const std::string& line : corpus) {
    IngestStats stats;
    ingest_line(m, line, {}, stats);
    CHECK(m.check().empty());
  }
}

TEST_CASE("line-by-line ingestion equals batch ingestion") {
  std::mt19937 rng(79);
  auto corpus = synth::phrase_corpus(rng, 50);
  Model batch = testutil::model_from_corpus(corpus, {}, "c");
  Model incremental;
  incremental.assume_meaningful("c");
  for (const std::string& line : corpus) {
    IngestStats stats;
    ingest_line(incremental, line, {}, stats);
  }
  CHECK(io::export_string(incremental, true) == io::export_string(batch, true));
  CHECK(io::export_string(incremental) == io::export_string(batch));
}

TEST_CASE("stored abstractions equal pure re-derivation over a 50-sentence corpus") {
  std::mt19937 rng(83);
  Model m = testutil::model_from_corpus(synth::phrase_corpus(rng, 50));
  auto scope = m.all_operations();
  for (const auto& [obj, cs] : m.abstractions()) {
    Abstraction fresh = abstract_over(m.registry(), m.concepts(), obj, scope);
    CHECK(std::set<ConceptId>(fresh.concepts.begin(), fresh.concepts.end()) == cs);
    CHECK(oracle::abstract(m.registry(), m.concepts(), obj, scope) == cs);
  }
}

TEST_CASE("meaningfulness judges corpus members and rejects scrambles") {
  Model m = testutil::model_from_corpus({"He is a good man", "He is a bad man"});

  auto yes = meaningfulness_check(m, "He is a good man", {});
  CHECK(yes.meaningful);
  CHECK_FALSE(yes.empty_line);
  REQUIRE(yes.positions.size() == 5);
  for (const auto& p : yes.positions) CHECK(p.supported());

  auto no = meaningfulness_check(m, "man good a is He", {});
  CHECK_FALSE(no.meaningful);
  REQUIRE(no.positions.size() == 5);
  CHECK_FALSE(no.positions[0].supported());  // "man" never opens a sentence
  CHECK(no.positions[2].supported());        // "a" is at position 2 in both sentences

  auto vac = meaningfulness_check(m, "", {});
  CHECK(vac.meaningful);
  CHECK(vac.empty_line);

  auto unknown = meaningfulness_check(m, "completely new words", {});
  CHECK_FALSE(unknown.meaningful);
  CHECK_FALSE(unknown.positions[0].token_op.has_value());
}

TEST_CASE("every ingested line is judged meaningful") {
  std::mt19937 rng(89);
  auto corpus = synth::positional_corpus(rng, 40);
  Model m = testutil::model_from_corpus(corpus);
  for (const std::string& line : corpus) CHECK(meaningfulness_check(m, line, {}).meaningful);
}

TEST_CASE("window ingestion registers n-gram subsequences") {
  TokenizerConfig cfg;
  cfg.window = 2;
  Model m;
  IngestStats stats = testutil::ingest_lines(m, {"a b c"}, cfg);
  CHECK(stats.sentences_registered == 1);  // windows are not sentences
  CHECK(stats.sentences_registered <= stats.lines_read);
  CHECK(m.registry().find_by_name("a b").has_value());
  CHECK(m.registry().find_by_name("b c").has_value());
  CHECK(m.registry().find_by_name("a b c").has_value());

  // window contexts support tokens at any fitting alignment
  auto rep = meaningfulness_check(m, "b c", cfg);
  CHECK(rep.meaningful);

  TokenizerConfig bad;
  bad.window = 1;
  Model fresh;
  fresh.assume_meaningful("x");
  IngestStats fresh_stats;
  CHECK_THROWS_AS(ingest_line(fresh, "a b", bad, fresh_stats), Error);
}

TEST_CASE("opspec parsing errors carry line numbers") {
  Model m;
  {
    std::istringstream in("prim \"a\"\nseq \"s\" \"a\"\n");
    CHECK_THROWS_AS(ingest_opspec(m, in), ParseError);
  }
  {
    std::istringstream in("seq \"s\" = \"ghost\"\n");
    Model fresh;
    CHECK_THROWS_AS(ingest_opspec(fresh, in), ParseError);
  }
  {
    std::istringstream in("prim \"unterminated\nprim \"b\"\n");
    Model fresh;
    CHECK_THROWS_AS(ingest_opspec(fresh, in), ParseError);
  }
  {
    std::istringstream in("wat \"a\"\n");
    Model fresh;
    CHECK_THROWS_AS(ingest_opspec(fresh, in), ParseError);
  }
}

TEST_CASE("opspec redeclaration with a different composition raises a contradiction") {
  Model m;
  std::istringstream in(
      "prim \"x\"\n"
      "prim \"y\"\n"
      "seq \"s\" = \"x\" \"y\"\n"
      "seq \"s\" = \"y\" \"x\"\n");
  CHECK_THROWS_AS(ingest_opspec(m, in), ContradictionError);
}

TEST_CASE("set declarations produce co-membership concepts") {
  Model m = testutil::model_from_spec(
      "prim \"a\"\n"
      "prim \"b\"\n"
      "set \"pair\" = \"a\" \"b\"\n"
      "set \"pair2\" = \"b\" \"a\"\n");
  OperationId a = testutil::op(m, "a");
  OperationId b = testutil::op(m, "b");
  // the two declarations intern to one operation
  CHECK(testutil::op(m, "pair") == testutil::op(m, "pair2"));
  Concept co = Concept::set_context({b});
  CHECK(satisfies(m.registry(), a, co));
  CHECK(extension(m.registry(), co) == std::vector<OperationId>{a});
}
