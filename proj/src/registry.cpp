#include "coab/registry.hpp"

#include <algorithm>
#include <utility>

#include "coab/errors.hpp"

namespace coab {

namespace {

std::vector<std::uint32_t> composition_key(const Composition& c) {
  std::vector<std::uint32_t> key;
  key.reserve(c.elements.size() + 1);
  key.push_back(static_cast<std::uint32_t>(c.kind));
  for (OperationId e : c.elements) key.push_back(e.value);
  return key;
}

}  // namespace

std::size_t Registry::KeyHash::operator()(const std::vector<std::uint32_t>& v) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint32_t x : v) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

Composition Composition::sequence(std::vector<OperationId> elems) {
  Composition c;
  c.kind = CompKind::Sequence;
  c.elements = std::move(elems);
  return c;
}

Composition Composition::set(std::vector<OperationId> elems) {
  Composition c;
  c.kind = CompKind::Set;
  c.elements = std::move(elems);
  std::sort(c.elements.begin(), c.elements.end());
  return c;
}

OperationId Registry::add(Composition composition, std::optional<std::string> display_name) {
  if (composition.kind == CompKind::Primitive) {
    if (!composition.elements.empty())
      throw Error("primitive composition must have no elements");
    if (!display_name || display_name->empty())
      throw Error("primitive operation requires a display name");
    if (auto it = prim_by_name_.find(*display_name); it != prim_by_name_.end()) return it->second;
    if (name_to_id_.contains(*display_name))
      throw Error("display name '" + *display_name + "' already bound to a different operation");
    OperationId id{static_cast<std::uint32_t>(ops_.size())};
    prim_by_name_.emplace(*display_name, id);
    name_to_id_.emplace(*display_name, id);
    ops_.push_back(Operation{id, std::move(composition), 0, std::move(display_name)});
    occ_.emplace_back();
    return id;
  }

  if (composition.elements.empty())
    throw EmptyCompositionError("sequence/set composition must have at least one element");
  for (OperationId e : composition.elements)
    if (!known(e)) throw UnknownComponentError("component #" + std::to_string(e.value) + " is not registered");
  if (composition.kind == CompKind::Set)
    std::sort(composition.elements.begin(), composition.elements.end());

  auto key = composition_key(composition);
  if (auto it = comp_intern_.find(key); it != comp_intern_.end()) {
    OperationId id = it->second;
    if (display_name) {
      auto [nit, fresh] = name_to_id_.emplace(*display_name, id);
      if (!fresh && nit->second != id)
        throw Error("display name '" + *display_name + "' already bound to a different operation");
      if (fresh && !ops_[id.value].display_name) ops_[id.value].display_name = *display_name;
    }
    return id;
  }

  std::uint32_t level = 0;
  for (OperationId e : composition.elements) level = std::max(level, ops_[e.value].level);
  level += 1;

  OperationId id{static_cast<std::uint32_t>(ops_.size())};
  if (display_name) {
    auto [nit, fresh] = name_to_id_.emplace(*display_name, id);
    if (!fresh) throw Error("display name '" + *display_name + "' already bound to a different operation");
  }
  SlotKind slot_kind = composition.kind == CompKind::Sequence ? SlotKind::SeqPos : SlotKind::SetMember;
  for (std::uint32_t i = 0; i < composition.elements.size(); ++i)
    occ_[composition.elements[i].value].push_back({id, Slot{slot_kind, i}});
  comp_intern_.emplace(std::move(key), id);
  ops_.push_back(Operation{id, std::move(composition), level, std::move(display_name)});
  occ_.emplace_back();
  return id;
}

const Operation& Registry::get(OperationId id) const {
  if (!known(id)) throw UnknownIdError("unknown operation id #" + std::to_string(id.value));
  return ops_[id.value];
}

std::optional<OperationId> Registry::find(const Composition& composition,
                                          const std::optional<std::string>& display_name) const {
  if (composition.kind == CompKind::Primitive) {
    if (!display_name) return std::nullopt;
    if (auto it = prim_by_name_.find(*display_name); it != prim_by_name_.end()) return it->second;
    return std::nullopt;
  }
  Composition canon = composition;
  if (canon.kind == CompKind::Set) std::sort(canon.elements.begin(), canon.elements.end());
  if (auto it = comp_intern_.find(composition_key(canon)); it != comp_intern_.end()) return it->second;
  return std::nullopt;
}

std::optional<OperationId> Registry::find_by_name(std::string_view name) const {
  if (auto it = name_to_id_.find(std::string(name)); it != name_to_id_.end()) return it->second;
  return std::nullopt;
}

std::span<const OccurrenceRecord> Registry::occurrences(OperationId id) const {
  if (!known(id)) throw UnknownIdError("unknown operation id #" + std::to_string(id.value));
  // Records are appended in registration order with ascending slots, so the
  // (enclosing id, slot) order falls out of construction.
  return occ_[id.value];
}

std::set<OperationId> Registry::decompose(OperationId id, std::uint32_t depth) const {
  get(id);
  std::set<OperationId> out;
  std::vector<OperationId> frontier{id};
  for (std::uint32_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<OperationId> next;
    for (OperationId f : frontier)
      for (OperationId e : ops_[f.value].composition.elements)
        if (out.insert(e).second) next.push_back(e);
    frontier = std::move(next);
  }
  return out;
}

}  // namespace coab
