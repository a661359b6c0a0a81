#include "coab/concepts.hpp"

#include <algorithm>
#include <set>

#include "coab/errors.hpp"

namespace coab {

Concept Concept::within_op(OperationId op) {
  Concept c;
  c.kind = ConceptKind::WithinOp;
  c.within = op;
  return c;
}

Concept Concept::seq_context(std::vector<OperationId> slots_with_hole) {
  std::size_t holes = 0;
  std::uint32_t pos = 0;
  for (std::uint32_t i = 0; i < slots_with_hole.size(); ++i) {
    if (!slots_with_hole[i].valid()) {
      ++holes;
      pos = i;
    }
  }
  if (holes != 1)
    throw MalformedConceptError("sequence context must contain exactly one hole, got " + std::to_string(holes));
  Concept c;
  c.kind = ConceptKind::SeqContext;
  c.slots = std::move(slots_with_hole);
  c.hole = pos;
  return c;
}

Concept Concept::seq_context(std::vector<OperationId> full_slots, std::uint32_t hole) {
  if (hole >= full_slots.size()) throw MalformedConceptError("hole position out of range");
  full_slots[hole] = OperationId{};
  return seq_context(std::move(full_slots));
}

Concept Concept::set_context(std::vector<OperationId> co_members) {
  for (OperationId m : co_members)
    if (!m.valid()) throw MalformedConceptError("set context members must be valid ids");
  Concept c;
  c.kind = ConceptKind::SetContext;
  c.co_members = std::move(co_members);
  std::sort(c.co_members.begin(), c.co_members.end());
  return c;
}

std::vector<std::uint32_t> Concept::key() const {
  std::vector<std::uint32_t> key;
  key.push_back(static_cast<std::uint32_t>(kind));
  switch (kind) {
    case ConceptKind::WithinOp:
      key.push_back(within.value);
      break;
    case ConceptKind::SeqContext:
      key.push_back(hole);
      for (OperationId s : slots) key.push_back(s.value);
      break;
    case ConceptKind::SetContext:
      for (OperationId m : co_members) key.push_back(m.value);
      break;
  }
  return key;
}

std::size_t ConceptStore::KeyHash::operator()(const std::vector<std::uint32_t>& v) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint32_t x : v) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

ConceptId ConceptStore::intern(const Concept& c) {
  auto key = c.key();
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  ConceptId id{static_cast<std::uint32_t>(concepts_.size())};
  index_.emplace(std::move(key), id);
  concepts_.push_back(c);
  return id;
}

std::optional<ConceptId> ConceptStore::find(const Concept& c) const {
  if (auto it = index_.find(c.key()); it != index_.end()) return it->second;
  return std::nullopt;
}

const Concept& ConceptStore::get(ConceptId id) const {
  if (!known(id)) throw UnknownIdError("unknown concept id C" + std::to_string(id.value));
  return concepts_[id.value];
}

Concept context_concept(const Composition& composition, Slot slot) {
  if (composition.kind == CompKind::Primitive)
    throw MalformedConceptError("primitives induce no context concepts");
  if (slot.index >= composition.elements.size())
    throw MalformedConceptError("slot index out of range");
  if (composition.kind == CompKind::Sequence)
    return Concept::seq_context(composition.elements, slot.index);
  std::vector<OperationId> co = composition.elements;
  co.erase(co.begin() + slot.index);
  return Concept::set_context(std::move(co));
}

namespace {

// Does removing one occurrence of `removed` from the sorted multiset `all`
// leave exactly the sorted multiset `co`?
bool minus_one_equals(const std::vector<OperationId>& all, OperationId removed,
                      const std::vector<OperationId>& co) {
  if (all.size() != co.size() + 1) return false;
  bool skipped = false;
  std::size_t j = 0;
  for (OperationId x : all) {
    if (!skipped && x == removed) {
      skipped = true;
      continue;
    }
    if (j >= co.size() || co[j] != x) return false;
    ++j;
  }
  return skipped && j == co.size();
}

}  // namespace

std::vector<Witness> witnesses_of(const Registry& reg, OperationId obj, const Concept& c) {
  reg.get(obj);
  std::vector<Witness> out;
  switch (c.kind) {
    case ConceptKind::WithinOp: {
      const Operation& op = reg.get(c.within);
      SlotKind sk = op.composition.kind == CompKind::Sequence ? SlotKind::SeqPos : SlotKind::SetMember;
      for (std::uint32_t i = 0; i < op.composition.elements.size(); ++i)
        if (op.composition.elements[i] == obj) out.push_back({c.within, Slot{sk, i}});
      break;
    }
    case ConceptKind::SeqContext: {
      std::vector<OperationId> filled = c.slots;
      filled[c.hole] = obj;
      if (auto id = reg.find(Composition::sequence(std::move(filled))))
        out.push_back({*id, Slot{SlotKind::SeqPos, c.hole}});
      break;
    }
    case ConceptKind::SetContext: {
      std::vector<OperationId> elems = c.co_members;
      elems.insert(std::upper_bound(elems.begin(), elems.end(), obj), obj);
      if (auto id = reg.find(Composition::set(std::move(elems)))) {
        // with duplicate members, removing any occurrence of obj leaves the
        // same co-member multiset, so every slot holding obj witnesses
        const auto& actual = reg.get(*id).composition.elements;
        for (std::uint32_t i = 0; i < actual.size(); ++i)
          if (actual[i] == obj) out.push_back({*id, Slot{SlotKind::SetMember, i}});
      }
      break;
    }
  }
  return out;
}

bool satisfies(const Registry& reg, OperationId obj, const Concept& c) {
  return !witnesses_of(reg, obj, c).empty();
}

std::vector<OperationId> extension(const Registry& reg, const Concept& c) {
  std::set<OperationId> out;
  switch (c.kind) {
    case ConceptKind::WithinOp: {
      const Operation& op = reg.get(c.within);
      out.insert(op.composition.elements.begin(), op.composition.elements.end());
      break;
    }
    case ConceptKind::SeqContext: {
      if (c.slots.size() == 1) {
        // No anchor element; only single-element sequences can match.
        for (std::uint32_t i = 0; i < reg.size(); ++i) {
          const Operation& op = reg.get(OperationId{i});
          if (op.composition.kind == CompKind::Sequence && op.composition.elements.size() == 1)
            out.insert(op.composition.elements[0]);
        }
        break;
      }
      // anchor on the least frequent context element
      std::uint32_t anchor = c.hole == 0 ? 1 : 0;
      for (std::uint32_t i = 0; i < c.slots.size(); ++i) {
        if (i == c.hole) continue;
        if (reg.occurrences(c.slots[i]).size() < reg.occurrences(c.slots[anchor]).size()) anchor = i;
      }
      OperationId anchor_elem = c.slots[anchor];
      for (const OccurrenceRecord& occ : reg.occurrences(anchor_elem)) {
        if (occ.slot != Slot{SlotKind::SeqPos, anchor}) continue;
        const auto& cand = reg.get(occ.encloser).composition.elements;
        if (cand.size() != c.slots.size()) continue;
        bool match = true;
        for (std::uint32_t i = 0; i < cand.size() && match; ++i)
          if (i != c.hole && cand[i] != c.slots[i]) match = false;
        if (match) out.insert(cand[c.hole]);
      }
      break;
    }
    case ConceptKind::SetContext: {
      if (c.co_members.empty()) {
        for (std::uint32_t i = 0; i < reg.size(); ++i) {
          const Operation& op = reg.get(OperationId{i});
          if (op.composition.kind == CompKind::Set && op.composition.elements.size() == 1)
            out.insert(op.composition.elements[0]);
        }
        break;
      }
      OperationId anchor_elem = c.co_members[0];
      std::set<OperationId> seen;
      for (const OccurrenceRecord& occ : reg.occurrences(anchor_elem)) {
        if (occ.slot.kind != SlotKind::SetMember) continue;
        if (!seen.insert(occ.encloser).second) continue;
        const auto& cand = reg.get(occ.encloser).composition.elements;
        if (cand.size() != c.co_members.size() + 1) continue;
        OperationId prev{};
        for (OperationId x : cand) {
          if (x == prev) continue;  // sorted; distinct candidates only
          prev = x;
          if (minus_one_equals(cand, x, c.co_members)) out.insert(x);
        }
      }
      break;
    }
  }
  return {out.begin(), out.end()};
}

std::vector<OperationId> equivalence_class(const Registry& reg, OperationId a, const Concept& c) {
  if (!satisfies(reg, a, c)) throw NotSatisfiedError("object #" + std::to_string(a.value) + " does not satisfy the concept");
  return extension(reg, c);
}

std::vector<Witness> witnesses_of(const Registry& reg, const ConceptStore& store, OperationId obj, ConceptId c) {
  return witnesses_of(reg, obj, store.get(c));
}

bool satisfies(const Registry& reg, const ConceptStore& store, OperationId obj, ConceptId c) {
  return satisfies(reg, obj, store.get(c));
}

std::vector<OperationId> extension(const Registry& reg, const ConceptStore& store, ConceptId c) {
  return extension(reg, store.get(c));
}

std::vector<OperationId> equivalence_class(const Registry& reg, const ConceptStore& store, OperationId a, ConceptId c) {
  return equivalence_class(reg, a, store.get(c));
}

}  // namespace coab
