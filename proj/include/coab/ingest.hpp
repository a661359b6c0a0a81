#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coab/model.hpp"
#include "coab/tokenizer.hpp"

namespace coab {

struct IngestStats {
  std::uint64_t lines_read = 0;
  std::uint64_t sentences_registered = 0;  // new (post-interning) composite ops
  std::uint64_t tokens_registered = 0;     // new primitives
  std::uint64_t concepts_derived = 0;      // newly interned concepts
  std::uint64_t abstractions_inserted = 0; // insert calls that changed the model
  std::uint64_t invalid_bytes = 0;

  IngestStats& operator+=(const IngestStats& o);
};

// Registers one line as a sequence operation over token primitives and
// abstracts every component through the consistency gate. Returns the
// sentence operation, or nullopt for a line with no tokens. The model must
// already carry an AssumeMeaningful assumption (or stricter ground).
std::optional<OperationId> ingest_line(Model& model, std::string_view line,
                                       const TokenizerConfig& config, IngestStats& stats);

// One sentence per line; '#'-prefixed lines are comments. Adds an
// AssumeMeaningful axiom for `source_label` before reading.
IngestStats ingest_corpus(Model& model, std::istream& in, const TokenizerConfig& config,
                          const std::string& source_label);

// Operation-spec files declare operations directly, one per line:
//   prim <name>
//   seq <name> = <name> ...
//   set <name> = <name> ...
// Names with spaces are double-quoted; names must be declared before use.
// Declared operations become SeedOperation ground axioms. Throws ParseError
// on malformed lines and ContradictionError when a name is redeclared with a
// different composition.
IngestStats ingest_opspec(Model& model, std::istream& in);

// After a newly created composite, derive and insert the abstraction of each
// of its components (exposed for callers registering operations by hand).
void abstract_components_of(Model& model, OperationId op, IngestStats& stats);

// lambda' candidates for "find something related to lambda within context
// sigma". With a concept sigma: the object targets of relations_via(lambda,
// sigma). Throws NotSatisfiedError when lambda does not satisfy sigma.
std::vector<OperationId> contextual_relation(const Model& model, OperationId lambda, ConceptId sigma);

// High-level context given as an object: every other object whose relation
// targets intersect both lambda's and sigma's.
std::vector<OperationId> contextual_relation(const Model& model, OperationId lambda, OperationId sigma);

struct PositionSupport {
  std::string token;
  std::optional<OperationId> token_op;      // nullopt: token never seen
  std::vector<ConceptId> supports;          // sequence-context concepts matching here
  bool supported() const noexcept { return !supports.empty(); }
};

struct MeaningfulnessReport {
  bool meaningful = false;
  bool empty_line = false;  // vacuously meaningful
  std::vector<PositionSupport> positions;
};

// A line is judged meaningful when every token satisfies, at its position,
// at least one sequence-context concept already in the model. With
// config.window set, window-sized contexts are matched at every alignment
// that fits inside the line. Pure; the model is not modified.
MeaningfulnessReport meaningfulness_check(const Model& model, std::string_view line,
                                          const TokenizerConfig& config);

}  // namespace coab
