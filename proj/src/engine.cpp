#include "coab/engine.hpp"

#include <algorithm>
#include <unordered_set>

#include "coab/errors.hpp"

namespace coab {

Abstraction abstract_over(const Registry& reg, const ConceptStore& store, OperationId obj,
                          std::span<const OperationId> scope) {
  reg.get(obj);
  std::unordered_set<std::uint32_t> in_scope;
  in_scope.reserve(scope.size());
  for (OperationId s : scope) {
    reg.get(s);
    in_scope.insert(s.value);
  }

  std::set<ConceptId> concepts;
  for (const OccurrenceRecord& occ : reg.occurrences(obj)) {
    if (!in_scope.contains(occ.encloser.value)) continue;
    if (auto cid = store.find(Concept::within_op(occ.encloser))) concepts.insert(*cid);
    if (auto cid = store.find(context_concept(reg.get(occ.encloser).composition, occ.slot)))
      concepts.insert(*cid);
  }

  Abstraction out;
  out.object = obj;
  out.concepts.assign(concepts.begin(), concepts.end());
  out.scope.assign(scope.begin(), scope.end());
  std::sort(out.scope.begin(), out.scope.end());
  out.scope.erase(std::unique(out.scope.begin(), out.scope.end()), out.scope.end());
  return out;
}

namespace {

// Shared core; returns false when obj lacks a structural witness for via.
bool relations_via_into(const Registry& reg, const ConceptStore& store, const AbstractionIndex& abs,
                        OperationId obj, ConceptId via, std::set<Relation>& out) {
  const Concept& c = store.get(via);
  std::vector<Witness> wits = witnesses_of(reg, obj, c);
  if (wits.empty()) return false;
  for (OperationId b : extension(reg, c))
    if (b != obj) out.insert(Relation{obj, via, TargetRef::op(b), true});
  for (const Witness& w : wits) {
    auto it = abs.find(w.encloser);
    if (it == abs.end()) continue;
    for (ConceptId d : it->second) out.insert(Relation{obj, via, TargetRef::concept_ref(d), false});
  }
  return true;
}

}  // namespace

std::vector<Relation> relations_via(const Registry& reg, const ConceptStore& store,
                                    const AbstractionIndex& abs, OperationId obj, ConceptId via) {
  reg.get(obj);
  std::set<Relation> out;
  if (!relations_via_into(reg, store, abs, obj, via, out))
    throw NotSatisfiedError("object #" + std::to_string(obj.value) + " does not satisfy C" +
                            std::to_string(via.value));
  return {out.begin(), out.end()};
}

std::vector<Relation> relations_of(const Registry& reg, const ConceptStore& store,
                                   const AbstractionIndex& abs, OperationId obj) {
  reg.get(obj);
  std::set<Relation> out;
  if (auto it = abs.find(obj); it != abs.end())
    for (ConceptId c : it->second) relations_via_into(reg, store, abs, obj, c, out);
  return {out.begin(), out.end()};
}

std::vector<Relation> restrict_to(const Registry& reg, const ConceptStore& store,
                                  const AbstractionIndex& abs, OperationId obj, ConceptId via) {
  return relations_via(reg, store, abs, obj, via);
}

namespace {

Relation relabel(Relation r, OperationId a, OperationId b) {
  auto swap_op = [&](OperationId x) { return x == a ? b : (x == b ? a : x); };
  r.source = swap_op(r.source);
  if (r.target.is_op()) r.target = TargetRef::op(swap_op(OperationId{r.target.id}));
  return r;
}

}  // namespace

DistinguishResult distinguish(const Registry& reg, const ConceptStore& store,
                              const AbstractionIndex& abs, OperationId a, OperationId b) {
  reg.get(a);
  reg.get(b);
  DistinguishResult res;
  if (a == b) return res;

  std::set<ConceptId> ca, cb;
  if (auto it = abs.find(a); it != abs.end()) ca = it->second;
  if (auto it = abs.find(b); it != abs.end()) cb = it->second;

  auto concept_marks = [&](const std::set<ConceptId>& own, const std::set<ConceptId>& other, OperationId owner) {
    for (ConceptId c : own)
      if (!other.contains(c))
        res.marks.push_back({DistinguishingMark::Kind::ConceptMark, owner, c, {}});
  };
  concept_marks(ca, cb, a);
  concept_marks(cb, ca, b);

  auto ra = relations_of(reg, store, abs, a);
  auto rb = relations_of(reg, store, abs, b);
  std::set<Relation> ra_set(ra.begin(), ra.end());
  std::set<Relation> rb_swapped;
  for (const Relation& r : rb) rb_swapped.insert(relabel(r, a, b));

  std::vector<DistinguishingMark> rel_marks;
  for (const Relation& r : ra_set)
    if (!rb_swapped.contains(r))
      rel_marks.push_back({DistinguishingMark::Kind::RelationMark, a, {}, r});
  for (const Relation& r : rb_swapped)
    if (!ra_set.contains(r))
      rel_marks.push_back({DistinguishingMark::Kind::RelationMark, b, {}, relabel(r, a, b)});
  std::sort(rel_marks.begin(), rel_marks.end(), [](const auto& x, const auto& y) {
    if (x.relation != y.relation) return x.relation < y.relation;
    return x.owner < y.owner;
  });
  // Concept marks were produced in (owner, id) group order; normalize to
  // ascending concept id across owners.
  std::stable_sort(res.marks.begin(), res.marks.end(),
                   [](const auto& x, const auto& y) { return x.concept_id < y.concept_id; });
  res.marks.insert(res.marks.end(), rel_marks.begin(), rel_marks.end());
  res.distinguishable = !res.marks.empty();
  return res;
}

}  // namespace coab
