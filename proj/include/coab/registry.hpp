#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coab/ids.hpp"

namespace coab {

enum class CompKind : std::uint8_t { Primitive, Sequence, Set };

// Description of what an operation is made of. Primitives have no elements;
// their decomposition lies below the registry's scope. Set elements are kept
// sorted so set compositions compare equal under reordering while duplicates
// are retained (multiset semantics).
struct Composition {
  CompKind kind = CompKind::Primitive;
  std::vector<OperationId> elements;

  static Composition primitive() { return {}; }
  static Composition sequence(std::vector<OperationId> elems);
  static Composition set(std::vector<OperationId> elems);

  friend bool operator==(const Composition&, const Composition&) = default;
};

enum class SlotKind : std::uint8_t { SeqPos, SetMember };

// One place inside a composition: a sequence position, or an index into the
// canonical (sorted) element list of a set.
struct Slot {
  SlotKind kind = SlotKind::SeqPos;
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(const Slot&, const Slot&) noexcept = default;
};

struct OccurrenceRecord {
  OperationId encloser;
  Slot slot;

  friend constexpr auto operator<=>(const OccurrenceRecord&, const OccurrenceRecord&) noexcept = default;
};

struct Operation {
  OperationId id;
  Composition composition;
  std::uint32_t level = 0;  // 0 iff primitive, else 1 + max component level
  std::optional<std::string> display_name;
};

// Stores operations with interned identities and an inverted occurrence
// index over their compositions.
//
// Interning: structurally identical compositions (same kind, same elements,
// same order for sequences, same display name for primitives) map to the same
// id. Components must be registered before the enclosing operation, which
// keeps the composition graph acyclic and levels well defined.
//
// Single writer, any number of readers once a write returns; all query
// methods are const and touch no mutable state.
class Registry {
 public:
  // Returns the id of the operation, reusing an existing one when the
  // composition is already registered. A display name is required for
  // primitives (it is their identity); for composites it is cosmetic and the
  // first binding of a name wins. Throws UnknownComponentError,
  // EmptyCompositionError, or Error on a name conflict (callers that need a
  // non-throwing identity check should probe with find()/find_by_name()).
  OperationId add(Composition composition, std::optional<std::string> display_name = std::nullopt);

  const Operation& get(OperationId id) const;
  std::size_t size() const noexcept { return ops_.size(); }
  bool known(OperationId id) const noexcept { return id.value < ops_.size(); }

  // Interning probe; never mutates. Primitives are looked up by name.
  std::optional<OperationId> find(const Composition& composition,
                                  const std::optional<std::string>& display_name = std::nullopt) const;
  std::optional<OperationId> find_by_name(std::string_view name) const;

  // All places where `id` occurs inside another composition, ordered by
  // (enclosing id, slot).
  std::span<const OccurrenceRecord> occurrences(OperationId id) const;

  // Components reachable from `id` within `depth` composition steps.
  // depth 0 yields the empty set; `id` itself is never a member.
  std::set<OperationId> decompose(OperationId id, std::uint32_t depth) const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept;
  };

  std::vector<Operation> ops_;
  std::vector<std::vector<OccurrenceRecord>> occ_;
  std::unordered_map<std::string, OperationId> prim_by_name_;
  std::unordered_map<std::vector<std::uint32_t>, OperationId, KeyHash> comp_intern_;
  std::unordered_map<std::string, OperationId> name_to_id_;
};

}  // namespace coab
