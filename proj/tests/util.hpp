#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coab/ingest.hpp"
#include "coab/model.hpp"

namespace testutil {

inline const char* kEq1Spec =
    "prim \"f1\"\n"
    "prim \"f2\"\n"
    "prim \"f3\"\n"
    "prim \"f4\"\n"
    "seq \"fa\" = \"f1\" \"f2\"\n"
    "seq \"fb\" = \"f3\" \"f1\" \"f4\"\n";

// Chunk-segmented NLP fixture:
// first two sentences share "he is a" and "man" around good/bad.
inline const char* kNlpSpecTwo =
    "prim \"he is a\"\n"
    "prim \"good\"\n"
    "prim \"man\"\n"
    "seq \"s\" = \"he is a\" \"good\" \"man\"\n"
    "prim \"bad\"\n"
    "seq \"s2\" = \"he is a\" \"bad\" \"man\"\n";

inline std::string nlp_spec_full() {
  return std::string(kNlpSpecTwo) +
         "prim \"he is very kind and generous\"\n"
         "seq \"u\" = \"s\" \"he is very kind and generous\"\n";
}

inline coab::Model model_from_spec(const std::string& spec, coab::ModelConfig cfg = {}) {
  coab::Model m(cfg);
  std::istringstream in(spec);
  coab::ingest_opspec(m, in);
  return m;
}

inline coab::IngestStats ingest_lines(coab::Model& m, const std::vector<std::string>& lines,
                                      coab::TokenizerConfig cfg = {},
                                      const std::string& label = "corpus") {
  std::string joined;
  for (const auto& l : lines) joined += l + "\n";
  std::istringstream in(joined);
  return coab::ingest_corpus(m, in, cfg, label);
}

inline coab::Model model_from_corpus(const std::vector<std::string>& lines,
                                     coab::TokenizerConfig cfg = {},
                                     const std::string& label = "corpus") {
  coab::Model m;
  ingest_lines(m, lines, cfg, label);
  return m;
}

inline coab::OperationId op(const coab::Model& m, const std::string& name) {
  auto id = m.registry().find_by_name(name);
  REQUIRE(id.has_value());
  return *id;
}

inline coab::ConceptId cid(const coab::Model& m, const coab::Concept& c) {
  auto id = m.concepts().find(c);
  REQUIRE(id.has_value());
  return *id;
}

// Random registry/model builder used by property tests: a layer of named
// primitives followed by composites drawing on everything built so far. All
// components are abstracted through the regular ingestion step, so the
// stored index matches structural derivation.
inline coab::Model random_model(std::mt19937& rng, int n_prims, int n_comps) {
  coab::Model m;
  coab::IngestStats stats;
  std::vector<coab::OperationId> ids;
  for (int i = 0; i < n_prims; ++i) {
    auto res = m.define_primitive("w" + std::to_string(i));
    ids.push_back(res.id);
  }
  std::uniform_int_distribution<int> arity_dist(1, 4);
  std::uniform_int_distribution<int> kind_dist(0, 9);
  for (int i = 0; i < n_comps; ++i) {
    int arity = arity_dist(rng);
    std::vector<coab::OperationId> comps;
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    for (int k = 0; k < arity; ++k) comps.push_back(ids[pick(rng)]);
    coab::CompKind kind = kind_dist(rng) < 7 ? coab::CompKind::Sequence : coab::CompKind::Set;
    auto res = m.define_composite(kind, comps, std::nullopt);
    REQUIRE(res.accepted());
    if (res.created) coab::abstract_components_of(m, res.id, stats);
    ids.push_back(res.id);
  }
  return m;
}

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    path_ = base / ("coab_test_" + std::to_string(rd()) + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testutil
