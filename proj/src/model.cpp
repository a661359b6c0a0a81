#include "coab/model.hpp"

#include <algorithm>

#include "coab/render.hpp"

namespace coab {

Model Model::restore(ModelConfig config, Registry reg, ConceptStore store,
                     std::vector<GroundAxiom> ground, AbstractionIndex abstractions) {
  Model m(config);
  m.reg_ = std::move(reg);
  m.store_ = std::move(store);
  m.ground_ = std::move(ground);
  m.abs_ = std::move(abstractions);
  for (const GroundAxiom& g : m.ground_) {
    if (g.kind == GroundAxiom::Kind::SeedOperation) m.reg_.get(g.op);
    if (g.kind == GroundAxiom::Kind::AssertedSatisfaction) {
      m.reg_.get(g.op);
      m.store_.get(g.concept_id);
    }
  }
  for (const auto& [obj, cs] : m.abs_) {
    m.reg_.get(obj);
    for (ConceptId c : cs) m.store_.get(c);
  }
  return m;
}

void Model::assume_meaningful(std::string source) {
  if (assumes(source)) return;
  GroundAxiom g;
  g.kind = GroundAxiom::Kind::AssumeMeaningful;
  g.source = std::move(source);
  ground_.push_back(std::move(g));
}

bool Model::assumes(std::string_view source) const {
  for (const GroundAxiom& g : ground_)
    if (g.kind == GroundAxiom::Kind::AssumeMeaningful && g.source == source) return true;
  return false;
}

void Model::intern_concepts_for(OperationId id) {
  const Operation& op = reg_.get(id);
  if (op.composition.kind == CompKind::Primitive) return;
  store_.intern(Concept::within_op(id));
  SlotKind sk = op.composition.kind == CompKind::Sequence ? SlotKind::SeqPos : SlotKind::SetMember;
  for (std::uint32_t i = 0; i < op.composition.elements.size(); ++i)
    store_.intern(context_concept(op.composition, Slot{sk, i}));
}

DefineResult Model::define_primitive(const std::string& name, bool as_seed) {
  if (auto bound = reg_.find_by_name(name)) {
    const Operation& existing = reg_.get(*bound);
    if (existing.composition.kind != CompKind::Primitive) {
      DefineResult res;
      res.rejected = Contradiction{
          Contradiction::Kind::IdentityConflict,
          "\"" + name + "\" := " + render_composition(reg_, existing.composition),
          "\"" + name + "\" := prim"};
      return res;
    }
    return {*bound, false, std::nullopt};
  }
  OperationId id = reg_.add(Composition::primitive(), name);
  if (as_seed) ground_.push_back(GroundAxiom{GroundAxiom::Kind::SeedOperation, "", id, {}});
  return {id, true, std::nullopt};
}

DefineResult Model::define_composite(CompKind kind, std::vector<OperationId> components,
                                     std::optional<std::string> name, bool as_seed) {
  Composition comp = kind == CompKind::Sequence ? Composition::sequence(std::move(components))
                                                : Composition::set(std::move(components));
  if (comp.elements.empty())
    throw EmptyCompositionError("sequence/set composition must have at least one element");
  for (OperationId e : comp.elements)
    if (!reg_.known(e)) throw UnknownComponentError("component #" + std::to_string(e.value) + " is not registered");

  std::optional<OperationId> existing = reg_.find(comp);
  if (name) {
    if (auto bound = reg_.find_by_name(*name); bound && (!existing || *bound != *existing)) {
      DefineResult res;
      res.rejected = Contradiction{
          Contradiction::Kind::IdentityConflict,
          "\"" + *name + "\" := " + render_composition(reg_, reg_.get(*bound).composition),
          "\"" + *name + "\" := " + render_composition(reg_, comp)};
      return res;
    }
  }

  OperationId id = reg_.add(std::move(comp), std::move(name));
  bool created = !existing.has_value();
  if (created) intern_concepts_for(id);
  if (as_seed) {
    bool seeded = std::any_of(ground_.begin(), ground_.end(), [&](const GroundAxiom& g) {
      return g.kind == GroundAxiom::Kind::SeedOperation && g.op == id;
    });
    if (!seeded) ground_.push_back(GroundAxiom{GroundAxiom::Kind::SeedOperation, "", id, {}});
  }
  return {id, created, std::nullopt};
}

std::optional<Contradiction> Model::refutation(OperationId obj, const Concept& c) const {
  auto refuted = [&](std::string why) {
    return Contradiction{Contradiction::Kind::RefutedSatisfaction, std::move(why),
                         render_op_ref(reg_, obj) + " -| " + render_concept(reg_, c)};
  };
  switch (c.kind) {
    case ConceptKind::WithinOp: {
      const Operation& encl = reg_.get(c.within);
      // Compositions at or below the elementary level are out of scope;
      // assertions about their insides stand as axioms.
      if (encl.level <= config_.elementary_level) return std::nullopt;
      const auto& elems = encl.composition.elements;
      if (std::find(elems.begin(), elems.end(), obj) == elems.end())
        return refuted(render_op_ref(reg_, c.within) + " := " +
                       render_composition(reg_, encl.composition) + " does not contain " +
                       render_op_ref(reg_, obj));
      return std::nullopt;
    }
    case ConceptKind::SeqContext: {
      std::vector<OperationId> filled = c.slots;
      filled[c.hole] = obj;
      Composition want = Composition::sequence(std::move(filled));
      if (!reg_.find(want))
        return refuted("no registered operation has composition " + render_composition(reg_, want));
      return std::nullopt;
    }
    case ConceptKind::SetContext: {
      std::vector<OperationId> elems = c.co_members;
      elems.push_back(obj);
      Composition want = Composition::set(std::move(elems));
      if (!reg_.find(want))
        return refuted("no registered operation has composition " + render_composition(reg_, want));
      return std::nullopt;
    }
  }
  return std::nullopt;
}

InsertResult Model::insert(const Abstraction& abstraction) {
  reg_.get(abstraction.object);
  for (ConceptId c : abstraction.concepts) {
    const Concept& cc = store_.get(c);
    if (auto contra = refutation(abstraction.object, cc)) return {false, std::move(contra)};
  }
  auto& slot = abs_[abstraction.object];
  std::size_t before = slot.size();
  slot.insert(abstraction.concepts.begin(), abstraction.concepts.end());
  return {slot.size() != before, std::nullopt};
}

std::optional<Contradiction> Model::relation_refutation(const Relation& relation) const {
  reg_.get(relation.source);
  const Concept& via = store_.get(relation.via);
  auto refuted = [&](std::string why) {
    return Contradiction{Contradiction::Kind::RefutedSatisfaction, std::move(why),
                         "relation " + render_op_ref(reg_, relation.source) + " -[C" +
                             std::to_string(relation.via.value) + "]-> " +
                             (relation.target.is_op()
                                  ? render_op_ref(reg_, OperationId{relation.target.id})
                                  : "C" + std::to_string(relation.target.id))};
  };

  std::vector<Witness> wits = witnesses_of(reg_, relation.source, via);
  if (wits.empty())
    return refuted(render_op_ref(reg_, relation.source) + " does not satisfy C" +
                   std::to_string(relation.via.value));
  if (relation.equivalence != relation.target.is_op())
    return refuted("equivalence flag is only valid for object targets");
  if (relation.target.is_op()) {
    OperationId t{relation.target.id};
    reg_.get(t);
    auto ext = extension(reg_, via);
    if (!std::binary_search(ext.begin(), ext.end(), t))
      return refuted("target is not in the extension of C" + std::to_string(relation.via.value));
  } else {
    ConceptId t{relation.target.id};
    store_.get(t);
    bool justified = false;
    for (const Witness& w : wits) {
      auto it = abs_.find(w.encloser);
      if (it != abs_.end() && it->second.contains(t)) {
        justified = true;
        break;
      }
    }
    if (!justified) return refuted("no witnessing encloser satisfies the target concept");
  }
  return std::nullopt;
}

InsertResult Model::insert_relation(const Relation& relation) {
  if (auto contra = relation_refutation(relation)) return {false, std::move(contra)};
  // The relation is derived content; what the model stores is the
  // satisfaction it presupposes.
  auto& slot = abs_[relation.source];
  bool changed = slot.insert(relation.via).second;
  return {changed, std::nullopt};
}

InsertResult Model::assert_satisfaction(OperationId obj, const Concept& c) {
  reg_.get(obj);
  if (auto contra = refutation(obj, c)) return {false, std::move(contra)};
  ConceptId cid = store_.intern(c);
  bool changed = abs_[obj].insert(cid).second;
  ground_.push_back(GroundAxiom{GroundAxiom::Kind::AssertedSatisfaction, "", obj, cid});
  return {changed, std::nullopt};
}

std::vector<Contradiction> Model::check() const {
  std::vector<Contradiction> out;
  for (const auto& [obj, cs] : abs_)
    for (ConceptId c : cs)
      if (auto contra = refutation(obj, store_.get(c))) out.push_back(std::move(*contra));
  for (const GroundAxiom& g : ground_)
    if (g.kind == GroundAxiom::Kind::AssertedSatisfaction)
      if (auto contra = refutation(g.op, store_.get(g.concept_id))) out.push_back(std::move(*contra));
  return out;
}

std::set<OperationId> Model::decompose(OperationId id, std::optional<std::uint32_t> depth) const {
  std::uint32_t limit;
  if (depth) {
    limit = *depth;
  } else if (config_.decomposition_depth < 0) {
    limit = 0xffffffffu;
  } else {
    limit = static_cast<std::uint32_t>(config_.decomposition_depth);
  }
  reg_.get(id);
  std::set<OperationId> out;
  std::vector<OperationId> frontier{id};
  for (std::uint32_t d = 0; d < limit && !frontier.empty(); ++d) {
    std::vector<OperationId> next;
    for (OperationId f : frontier) {
      const Operation& op = reg_.get(f);
      if (op.level <= config_.elementary_level) continue;  // atoms, not decomposed
      for (OperationId e : op.composition.elements)
        if (reg_.get(e).level >= config_.elementary_level && out.insert(e).second) next.push_back(e);
    }
    frontier = std::move(next);
  }
  return out;
}

std::vector<OperationId> Model::all_operations() const {
  std::vector<OperationId> out;
  out.reserve(reg_.size());
  for (std::uint32_t i = 0; i < reg_.size(); ++i) out.push_back(OperationId{i});
  return out;
}

}  // namespace coab
