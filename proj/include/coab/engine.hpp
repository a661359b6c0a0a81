#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "coab/concepts.hpp"
#include "coab/ids.hpp"
#include "coab/registry.hpp"

namespace coab {

// Stored satisfactions per object: the model-side record of which concepts
// each object has been described by. Ordered containers keep every derived
// listing deterministic.
using AbstractionIndex = std::map<OperationId, std::set<ConceptId>>;

// An object together with the concepts it satisfies over a chosen scope.
struct Abstraction {
  OperationId object;
  std::vector<ConceptId> concepts;  // ascending
  std::vector<OperationId> scope;   // ascending
};

struct TargetRef {
  enum class Kind : std::uint8_t { Op, ConceptRef };
  Kind kind = Kind::Op;
  std::uint32_t id = kInvalidId;

  static TargetRef op(OperationId o) { return {Kind::Op, o.value}; }
  static TargetRef concept_ref(ConceptId c) { return {Kind::ConceptRef, c.value}; }
  bool is_op() const noexcept { return kind == Kind::Op; }

  friend constexpr auto operator<=>(const TargetRef&, const TargetRef&) noexcept = default;
};

// A directed edge from an object, through a concept it satisfies, to either
// an equivalent object (equivalence = true) or a concept satisfied by the
// witnessing enclosing operation.
struct Relation {
  OperationId source;
  ConceptId via;
  TargetRef target;
  bool equivalence = false;

  friend constexpr auto operator<=>(const Relation& a, const Relation& b) noexcept {
    if (auto c = a.via <=> b.via; c != 0) return c;
    if (auto c = a.target <=> b.target; c != 0) return c;
    if (auto c = a.source <=> b.source; c != 0) return c;
    return a.equivalence <=> b.equivalence;
  }
  friend constexpr bool operator==(const Relation&, const Relation&) noexcept = default;
};

// Mechanical abstracting: every interned concept `obj` satisfies with a
// witness whose enclosing operation lies in `scope`. Pure; mutates nothing.
// Concepts not present in the store (never interned by the model) do not
// take part.
Abstraction abstract_over(const Registry& reg, const ConceptStore& store, OperationId obj,
                          std::span<const OperationId> scope);

// Relations reachable from `obj` through `via`: one equivalence edge per
// other member of extension(via), plus one edge to every concept in the
// stored abstraction of each witnessing encloser (single propagation step).
// Ordered by (via, target). Throws NotSatisfiedError when obj does not
// satisfy via.
std::vector<Relation> relations_via(const Registry& reg, const ConceptStore& store,
                                    const AbstractionIndex& abs, OperationId obj, ConceptId via);

// Union of relations_via over all concepts stored for `obj`. Stored concepts
// without structural backing (unrefutable assertions) contribute nothing.
std::vector<Relation> relations_of(const Registry& reg, const ConceptStore& store,
                                   const AbstractionIndex& abs, OperationId obj);

// The restriction of obj's relations to those reachable through `via` alone;
// always a subset of relations_of.
std::vector<Relation> restrict_to(const Registry& reg, const ConceptStore& store,
                                  const AbstractionIndex& abs, OperationId obj, ConceptId via);

// One profile difference between two objects: a concept or a relation held
// by `owner` with no counterpart on the other side (relations compared after
// relabeling one object as the other).
struct DistinguishingMark {
  enum class Kind : std::uint8_t { ConceptMark, RelationMark };
  Kind kind = Kind::ConceptMark;
  OperationId owner;
  ConceptId concept_id{};
  Relation relation{};
};

struct DistinguishResult {
  bool distinguishable = false;
  std::vector<DistinguishingMark> marks;  // concept marks first, each group ordered
};

// Full-profile comparison of a and b within the model scope: equal concept
// sets and (label-swapped) relation sets mean indistinguishable.
DistinguishResult distinguish(const Registry& reg, const ConceptStore& store,
                              const AbstractionIndex& abs, OperationId a, OperationId b);

}  // namespace coab
