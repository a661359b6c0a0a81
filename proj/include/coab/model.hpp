#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coab/concepts.hpp"
#include "coab/engine.hpp"
#include "coab/errors.hpp"
#include "coab/registry.hpp"

namespace coab {

struct ModelConfig {
  // Lowest abstraction level considered: operations at or below this level
  // count as atoms, so satisfaction assertions about their insides cannot be
  // refuted and decomposition stops there. 0 = primitives.
  std::uint32_t elementary_level = 0;
  // Default decomposition depth for queries; negative = unlimited.
  std::int64_t decomposition_depth = -1;
  // Whether derived relations are part of the model's exported content.
  bool include_relations = true;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct GroundAxiom {
  enum class Kind : std::uint8_t { AssumeMeaningful, SeedOperation, AssertedSatisfaction };
  Kind kind = Kind::AssumeMeaningful;
  std::string source;       // AssumeMeaningful: label of the trusted input
  OperationId op{};         // SeedOperation / AssertedSatisfaction
  ConceptId concept_id{};   // AssertedSatisfaction

  friend bool operator==(const GroundAxiom&, const GroundAxiom&) = default;
};

// A validity violation. IdentityConflict: one identifier (name) bound to two
// different compositions. RefutedSatisfaction: an asserted satisfaction that
// complete structural knowledge rules out.
struct Contradiction {
  enum class Kind : std::uint8_t { IdentityConflict, RefutedSatisfaction };
  Kind kind = Kind::IdentityConflict;
  std::string existing;  // the entry already in the model
  std::string offered;   // the entry that clashes with it
};

// Thrown by ingestion-level code when a rejection cannot be handled locally.
struct ContradictionError : Error {
  Contradiction info;
  explicit ContradictionError(Contradiction c)
      : Error("contradiction: " + c.offered + " vs " + c.existing), info(std::move(c)) {}
};

struct DefineResult {
  OperationId id{};
  bool created = false;
  std::optional<Contradiction> rejected;
  bool accepted() const noexcept { return !rejected.has_value(); }
};

struct InsertResult {
  bool changed = false;
  std::optional<Contradiction> rejected;
  bool accepted() const noexcept { return !rejected.has_value(); }
};

// The system of abstractions: ground axioms, a registry of operations, the
// interned concept inventory, and the stored satisfactions derived from the
// ground. Every mutation goes through a validity gate (no identifier may
// denote two compositions; no stored satisfaction may be structurally
// refuted) and is atomic: a rejected call leaves the model untouched.
//
// Single writer per model; const queries run on committed state only.
class Model {
 public:
  explicit Model(ModelConfig config = {}) : config_(config) {}

  // Rebuilds a model from persisted parts; reference validity is checked,
  // consistency is the caller's concern (see model_io::check_file).
  static Model restore(ModelConfig config, Registry reg, ConceptStore store,
                       std::vector<GroundAxiom> ground, AbstractionIndex abstractions);

  const ModelConfig& config() const noexcept { return config_; }
  const Registry& registry() const noexcept { return reg_; }
  const ConceptStore& concepts() const noexcept { return store_; }
  const std::vector<GroundAxiom>& ground() const noexcept { return ground_; }
  const AbstractionIndex& abstractions() const noexcept { return abs_; }

  // Records that a source of input is trusted as meaningful. Idempotent.
  void assume_meaningful(std::string source);
  bool assumes(std::string_view source) const;

  // Registers an operation through the identity gate. `as_seed` records a
  // SeedOperation ground axiom (operations given to the model rather than
  // derived from read input). Newly created composites have their within/
  // context concepts interned immediately, in slot order.
  DefineResult define_primitive(const std::string& name, bool as_seed = false);
  DefineResult define_composite(CompKind kind, std::vector<OperationId> components,
                                std::optional<std::string> name, bool as_seed = false);

  // Inserts stored satisfactions; every (object, concept) pair must survive
  // structural refutation. `changed` reports whether the derived set grew.
  InsertResult insert(const Abstraction& abstraction);

  // Validates that the relation is reproducible from the current model and,
  // if so, records the satisfaction it presupposes (the relation itself is
  // derived content and will reappear in every export).
  InsertResult insert_relation(const Relation& relation);

  // Asserts obj -| c as a ground axiom. The concept is interned only when
  // the assertion is accepted.
  InsertResult assert_satisfaction(OperationId obj, const Concept& c);

  // Exhaustive re-check of stored content; empty report = consistent.
  std::vector<Contradiction> check() const;

  // Config-aware decomposition: stops at the elementary level and uses the
  // configured default depth when none is given.
  std::set<OperationId> decompose(OperationId id, std::optional<std::uint32_t> depth = std::nullopt) const;

  std::vector<OperationId> all_operations() const;

  // Engaged when obj -| c is structurally refutable and refuted; nullopt
  // when the assertion stands.
  std::optional<Contradiction> refutation(OperationId obj, const Concept& c) const;

  // Engaged when the relation is not reproducible from the current model.
  std::optional<Contradiction> relation_refutation(const Relation& relation) const;

 private:
  void intern_concepts_for(OperationId id);

  ModelConfig config_;
  Registry reg_;
  ConceptStore store_;
  std::vector<GroundAxiom> ground_;
  AbstractionIndex abs_;
};

}  // namespace coab
