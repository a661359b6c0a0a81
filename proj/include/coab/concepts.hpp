#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "coab/ids.hpp"
#include "coab/registry.hpp"

namespace coab {

enum class ConceptKind : std::uint8_t {
  WithinOp,    // operable within the composition of a particular operation
  SeqContext,  // operable at a fixed position of a fixed sequence context
  SetContext,  // operable among a fixed multiset of co-members
};

// An interned description of one way of being operable. SeqContext carries
// the full composition with exactly one hole (the slot at `hole` holds an
// invalid id); SetContext carries the composition minus one occurrence of
// the hole, kept sorted.
struct Concept {
  ConceptKind kind = ConceptKind::WithinOp;
  OperationId within{};
  std::vector<OperationId> slots;
  std::uint32_t hole = 0;
  std::vector<OperationId> co_members;

  static Concept within_op(OperationId op);
  // Slots with exactly one invalid id marking the hole; throws
  // MalformedConceptError otherwise.
  static Concept seq_context(std::vector<OperationId> slots_with_hole);
  static Concept seq_context(std::vector<OperationId> full_slots, std::uint32_t hole);
  static Concept set_context(std::vector<OperationId> co_members);

  // Flat encoding used for interning and hashing.
  std::vector<std::uint32_t> key() const;

  friend bool operator==(const Concept& a, const Concept& b) { return a.key() == b.key(); }
};

// Records why a satisfaction holds: the enclosing operation and the slot at
// which the queried object sits.
struct Witness {
  OperationId encloser;
  Slot slot;

  friend constexpr auto operator<=>(const Witness&, const Witness&) noexcept = default;
};

// Interning store for concepts. Structurally equal concepts share one id;
// ids are dense and assigned in interning order, so two runs over the same
// input stream assign identical ids.
class ConceptStore {
 public:
  ConceptId intern(const Concept& c);
  std::optional<ConceptId> find(const Concept& c) const;
  const Concept& get(ConceptId id) const;
  std::size_t size() const noexcept { return concepts_.size(); }
  bool known(ConceptId id) const noexcept { return id.value < concepts_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept;
  };

  std::vector<Concept> concepts_;
  std::unordered_map<std::vector<std::uint32_t>, ConceptId, KeyHash> index_;
};

// The context concept induced by one slot of a registered composition: for a
// sequence, the full pattern with a hole at that position; for a set, the
// remaining multiset. Throws MalformedConceptError for primitives.
Concept context_concept(const Composition& composition, Slot slot);

// All occurrences evidencing `obj -| c`, in deterministic (encloser, slot)
// order. Empty means the concept is not satisfied.
std::vector<Witness> witnesses_of(const Registry& reg, OperationId obj, const Concept& c);

bool satisfies(const Registry& reg, OperationId obj, const Concept& c);

// Every registered operation satisfying `c`, ascending by id.
std::vector<OperationId> extension(const Registry& reg, const Concept& c);

// extension(c), provided `a` itself satisfies c; members are exactly the
// objects equivalent to `a` with respect to c. Throws NotSatisfiedError.
std::vector<OperationId> equivalence_class(const Registry& reg, OperationId a, const Concept& c);

// Id-based conveniences.
std::vector<Witness> witnesses_of(const Registry& reg, const ConceptStore& store, OperationId obj, ConceptId c);
bool satisfies(const Registry& reg, const ConceptStore& store, OperationId obj, ConceptId c);
std::vector<OperationId> extension(const Registry& reg, const ConceptStore& store, ConceptId c);
std::vector<OperationId> equivalence_class(const Registry& reg, const ConceptStore& store, OperationId a, ConceptId c);

}  // namespace coab
