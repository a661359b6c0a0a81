#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coab/model.hpp"

namespace coab::io {

// Raw records of a model stream, before any consistency judgement. Keeping
// the staging form around lets `check` report on files that cannot be
// hydrated (e.g. one id bound to two compositions).
struct RawOp {
  std::uint32_t id = 0;
  CompKind kind = CompKind::Primitive;
  std::vector<std::uint32_t> elems;
  std::optional<std::string> name;
};

struct RawConcept {
  std::uint32_t id = 0;
  ConceptKind kind = ConceptKind::WithinOp;
  std::uint32_t op = 0;                      // within
  std::vector<std::uint32_t> slots;          // seqctx; kInvalidId marks the hole
  std::vector<std::uint32_t> co;             // setctx
};

struct RawGround {
  GroundAxiom::Kind kind = GroundAxiom::Kind::AssumeMeaningful;
  std::string source;
  std::uint32_t op = 0;
  std::uint32_t concept_id = 0;
};

struct RawAbs {
  std::uint32_t obj = 0;
  std::vector<std::uint32_t> concepts;
};

struct RawRel {
  std::uint32_t src = 0;
  std::uint32_t via = 0;
  bool target_is_op = true;
  std::uint32_t tgt = 0;
  bool eq = false;
};

struct ModelFile {
  int version = 1;
  ModelConfig config;
  std::vector<RawOp> ops;
  std::vector<RawConcept> concepts;
  std::vector<RawGround> ground;
  std::vector<RawAbs> abs;
  std::vector<RawRel> rels;
};

// One JSON record per line, version header first. Throws ParseError /
// VersionMismatchError.
ModelFile parse_model_stream(std::istream& in);

// Identifier-level contradictions in the raw records: the same id or the
// same name bound to two different compositions.
std::vector<Contradiction> identity_conflicts(const ModelFile& file);

// Materializes a model from the records. Requires dense ascending ids and
// valid references; throws ParseError otherwise. Consistency beyond that is
// check_file's concern.
Model hydrate(const ModelFile& file);

// Full report: identity conflicts, then (when hydratable) refuted stored
// satisfactions and unreproducible relation records. Empty = consistent.
std::vector<Contradiction> check_file(const ModelFile& file);

// Deterministic line-per-record serialization. With `canonical`, operation
// and concept ids are renumbered by structure (level, then a content key) so
// that models built from the same material in any order serialize to
// identical bytes. Relations are derived content, recomputed from the
// current state when config.include_relations is set.
void write_model(std::ostream& out, const Model& model, bool canonical = false);

std::string export_string(const Model& model, bool canonical = false);

// Parse + identity gate + hydrate. Throws IoError, ParseError,
// ContradictionError.
Model load_model_file(const std::string& path);

// Atomic: writes a temp file in the target directory and renames it over
// `path`.
void save_model_file(const std::string& path, const Model& model, bool canonical = false);

}  // namespace coab::io
