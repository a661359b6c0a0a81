#include "coab/model_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "coab/engine.hpp"
#include "coab/render.hpp"

namespace coab::io {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

std::string kind_tag(CompKind k) {
  switch (k) {
    case CompKind::Primitive: return "prim";
    case CompKind::Sequence: return "seq";
    case CompKind::Set: return "set";
  }
  return "?";
}

CompKind parse_kind_tag(const std::string& s, std::size_t line_no) {
  if (s == "prim") return CompKind::Primitive;
  if (s == "seq") return CompKind::Sequence;
  if (s == "set") return CompKind::Set;
  throw ParseError("line " + std::to_string(line_no) + ": unknown composition kind '" + s + "'");
}

// Structure keys give every operation a content-derived total order:
// primitives by name, composites by the keys of their components. Components
// always carry smaller ids than their enclosers, so one forward pass works.
std::vector<std::string> op_keys(const Registry& reg) {
  std::vector<std::string> keys(reg.size());
  for (std::uint32_t i = 0; i < reg.size(); ++i) {
    const Operation& op = reg.get(OperationId{i});
    switch (op.composition.kind) {
      case CompKind::Primitive:
        keys[i] = "p\x1f" + *op.display_name;
        break;
      case CompKind::Sequence: {
        std::string k = "q(";
        for (OperationId e : op.composition.elements) k += keys[e.value] + "\x1f";
        keys[i] = k + ")";
        break;
      }
      case CompKind::Set: {
        std::vector<std::string> parts;
        for (OperationId e : op.composition.elements) parts.push_back(keys[e.value]);
        std::sort(parts.begin(), parts.end());
        std::string k = "s(";
        for (const auto& p : parts) k += p + "\x1f";
        keys[i] = k + ")";
        break;
      }
    }
  }
  return keys;
}

std::string concept_key(const Concept& c, const std::vector<std::string>& opkeys) {
  switch (c.kind) {
    case ConceptKind::WithinOp:
      return "w(" + opkeys[c.within.value] + ")";
    case ConceptKind::SeqContext: {
      std::string k = "cq(";
      for (std::uint32_t i = 0; i < c.slots.size(); ++i)
        k += (i == c.hole ? std::string("\x01") : opkeys[c.slots[i].value]) + "\x1f";
      return k + ")";
    }
    case ConceptKind::SetContext: {
      std::vector<std::string> parts;
      for (OperationId m : c.co_members) parts.push_back(opkeys[m.value]);
      std::sort(parts.begin(), parts.end());
      std::string k = "cs(";
      for (const auto& p : parts) k += p + "\x1f";
      return k + ")";
    }
  }
  return "?";
}

struct IdMaps {
  std::vector<std::uint32_t> op;       // old id -> emitted id
  std::vector<std::uint32_t> cpt;
  std::vector<std::uint32_t> op_order;  // emit order: op_order[new id] = old id
  std::vector<std::uint32_t> cpt_order;
};

IdMaps identity_maps(const Model& m) {
  IdMaps maps;
  maps.op.resize(m.registry().size());
  maps.cpt.resize(m.concepts().size());
  std::iota(maps.op.begin(), maps.op.end(), 0u);
  std::iota(maps.cpt.begin(), maps.cpt.end(), 0u);
  maps.op_order = maps.op;
  maps.cpt_order = maps.cpt;
  return maps;
}

IdMaps canonical_maps(const Model& m) {
  const Registry& reg = m.registry();
  const ConceptStore& store = m.concepts();
  std::vector<std::string> keys = op_keys(reg);

  IdMaps maps;
  maps.op_order.resize(reg.size());
  std::iota(maps.op_order.begin(), maps.op_order.end(), 0u);
  std::sort(maps.op_order.begin(), maps.op_order.end(), [&](std::uint32_t a, std::uint32_t b) {
    std::uint32_t la = reg.get(OperationId{a}).level, lb = reg.get(OperationId{b}).level;
    if (la != lb) return la < lb;
    return keys[a] < keys[b];
  });
  maps.op.resize(reg.size());
  for (std::uint32_t rank = 0; rank < maps.op_order.size(); ++rank) maps.op[maps.op_order[rank]] = rank;

  std::vector<std::string> ckeys(store.size());
  for (std::uint32_t i = 0; i < store.size(); ++i) ckeys[i] = concept_key(store.get(ConceptId{i}), keys);
  maps.cpt_order.resize(store.size());
  std::iota(maps.cpt_order.begin(), maps.cpt_order.end(), 0u);
  std::sort(maps.cpt_order.begin(), maps.cpt_order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return ckeys[a] < ckeys[b]; });
  maps.cpt.resize(store.size());
  for (std::uint32_t rank = 0; rank < maps.cpt_order.size(); ++rank) maps.cpt[maps.cpt_order[rank]] = rank;
  return maps;
}

json config_to_json(const ModelConfig& c) {
  return json{{"elementary_level", c.elementary_level},
              {"decomposition_depth", c.decomposition_depth},
              {"include_relations", c.include_relations}};
}

}  // namespace

void write_model(std::ostream& out, const Model& model, bool canonical) {
  const Registry& reg = model.registry();
  const ConceptStore& store = model.concepts();
  IdMaps maps = canonical ? canonical_maps(model) : identity_maps(model);

  json header{{"t", "model"}, {"v", kFormatVersion}, {"config", config_to_json(model.config())}};
  out << header.dump() << '\n';

  std::vector<std::string> ground_lines;
  for (const GroundAxiom& g : model.ground()) {
    json j;
    switch (g.kind) {
      case GroundAxiom::Kind::AssumeMeaningful:
        j = json{{"t", "ground"}, {"kind", "assume_meaningful"}, {"source", g.source}};
        break;
      case GroundAxiom::Kind::SeedOperation:
        j = json{{"t", "ground"}, {"kind", "seed_op"}, {"op", maps.op[g.op.value]}};
        break;
      case GroundAxiom::Kind::AssertedSatisfaction:
        j = json{{"t", "ground"},
                 {"kind", "asserted_satisfaction"},
                 {"op", maps.op[g.op.value]},
                 {"concept", maps.cpt[g.concept_id.value]}};
        break;
    }
    ground_lines.push_back(j.dump());
  }
  std::sort(ground_lines.begin(), ground_lines.end());
  ground_lines.erase(std::unique(ground_lines.begin(), ground_lines.end()), ground_lines.end());
  for (const auto& l : ground_lines) out << l << '\n';

  for (std::uint32_t rank = 0; rank < maps.op_order.size(); ++rank) {
    const Operation& op = reg.get(OperationId{maps.op_order[rank]});
    json j{{"t", "op"}, {"id", rank}, {"kind", kind_tag(op.composition.kind)}};
    if (op.composition.kind != CompKind::Primitive) {
      std::vector<std::uint32_t> elems;
      for (OperationId e : op.composition.elements) elems.push_back(maps.op[e.value]);
      if (op.composition.kind == CompKind::Set) std::sort(elems.begin(), elems.end());
      j["elems"] = elems;
    }
    if (op.display_name) j["name"] = *op.display_name;
    out << j.dump() << '\n';
  }

  for (std::uint32_t rank = 0; rank < maps.cpt_order.size(); ++rank) {
    const Concept& c = store.get(ConceptId{maps.cpt_order[rank]});
    json j{{"t", "concept"}, {"id", rank}};
    switch (c.kind) {
      case ConceptKind::WithinOp:
        j["kind"] = "within";
        j["op"] = maps.op[c.within.value];
        break;
      case ConceptKind::SeqContext: {
        j["kind"] = "seqctx";
        json slots = json::array();
        for (std::uint32_t i = 0; i < c.slots.size(); ++i) {
          if (i == c.hole)
            slots.push_back(nullptr);
          else
            slots.push_back(maps.op[c.slots[i].value]);
        }
        j["slots"] = std::move(slots);
        break;
      }
      case ConceptKind::SetContext: {
        j["kind"] = "setctx";
        std::vector<std::uint32_t> co;
        for (OperationId m : c.co_members) co.push_back(maps.op[m.value]);
        std::sort(co.begin(), co.end());
        j["co"] = co;
        break;
      }
    }
    out << j.dump() << '\n';
  }

  std::map<std::uint32_t, std::vector<std::uint32_t>> abs_lines;
  for (const auto& [obj, cs] : model.abstractions()) {
    std::vector<std::uint32_t> mapped;
    for (ConceptId c : cs) mapped.push_back(maps.cpt[c.value]);
    std::sort(mapped.begin(), mapped.end());
    abs_lines[maps.op[obj.value]] = std::move(mapped);
  }
  for (const auto& [obj, cs] : abs_lines)
    out << json{{"t", "abs"}, {"obj", obj}, {"concepts", cs}}.dump() << '\n';

  if (model.config().include_relations) {
    std::vector<Relation> rels;
    for (const auto& [obj, unused] : model.abstractions()) {
      (void)unused;
      for (const Relation& r : relations_of(reg, store, model.abstractions(), obj)) {
        Relation mapped = r;
        mapped.source = OperationId{maps.op[r.source.value]};
        mapped.via = ConceptId{maps.cpt[r.via.value]};
        mapped.target = r.target.is_op() ? TargetRef::op(OperationId{maps.op[r.target.id]})
                                         : TargetRef::concept_ref(ConceptId{maps.cpt[r.target.id]});
        rels.push_back(mapped);
      }
    }
    // file order: (source, via, target)
    std::sort(rels.begin(), rels.end(), [](const Relation& x, const Relation& y) {
      if (x.source != y.source) return x.source < y.source;
      return x < y;
    });
    rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
    for (const Relation& r : rels)
      out << json{{"t", "rel"},
                  {"src", r.source.value},
                  {"via", r.via.value},
                  {"tkind", r.target.is_op() ? "op" : "concept"},
                  {"tgt", r.target.id},
                  {"eq", r.equivalence}}
                 .dump()
          << '\n';
  }
}

std::string export_string(const Model& model, bool canonical) {
  std::ostringstream ss;
  write_model(ss, model, canonical);
  return ss.str();
}

ModelFile parse_model_stream(std::istream& in) {
  ModelFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      std::string t = j.at("t").get<std::string>();
      if (!have_header) {
        if (t != "model") throw ParseError("line 1: expected model header");
        int v = j.at("v").get<int>();
        if (v != kFormatVersion)
          throw VersionMismatchError("unsupported model format version " + std::to_string(v));
        if (j.contains("config")) {
          const json& c = j["config"];
          file.config.elementary_level = c.value("elementary_level", 0u);
          file.config.decomposition_depth = c.value("decomposition_depth", std::int64_t{-1});
          file.config.include_relations = c.value("include_relations", true);
        }
        have_header = true;
        continue;
      }
      if (t == "op") {
        RawOp op;
        op.id = j.at("id").get<std::uint32_t>();
        op.kind = parse_kind_tag(j.at("kind").get<std::string>(), line_no);
        if (op.kind != CompKind::Primitive) op.elems = j.at("elems").get<std::vector<std::uint32_t>>();
        if (j.contains("name")) op.name = j["name"].get<std::string>();
        if (op.kind == CompKind::Primitive && !op.name)
          throw ParseError("line " + std::to_string(line_no) + ": primitive without a name");
        file.ops.push_back(std::move(op));
      } else if (t == "concept") {
        RawConcept c;
        c.id = j.at("id").get<std::uint32_t>();
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "within") {
          c.kind = ConceptKind::WithinOp;
          c.op = j.at("op").get<std::uint32_t>();
        } else if (kind == "seqctx") {
          c.kind = ConceptKind::SeqContext;
          for (const json& s : j.at("slots"))
            c.slots.push_back(s.is_null() ? kInvalidId : s.get<std::uint32_t>());
        } else if (kind == "setctx") {
          c.kind = ConceptKind::SetContext;
          c.co = j.at("co").get<std::vector<std::uint32_t>>();
        } else {
          throw ParseError("line " + std::to_string(line_no) + ": unknown concept kind '" + kind + "'");
        }
        file.concepts.push_back(std::move(c));
      } else if (t == "ground") {
        RawGround g;
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "assume_meaningful") {
          g.kind = GroundAxiom::Kind::AssumeMeaningful;
          g.source = j.at("source").get<std::string>();
        } else if (kind == "seed_op") {
          g.kind = GroundAxiom::Kind::SeedOperation;
          g.op = j.at("op").get<std::uint32_t>();
        } else if (kind == "asserted_satisfaction") {
          g.kind = GroundAxiom::Kind::AssertedSatisfaction;
          g.op = j.at("op").get<std::uint32_t>();
          g.concept_id = j.at("concept").get<std::uint32_t>();
        } else {
          throw ParseError("line " + std::to_string(line_no) + ": unknown ground kind '" + kind + "'");
        }
        file.ground.push_back(std::move(g));
      } else if (t == "abs") {
        RawAbs a;
        a.obj = j.at("obj").get<std::uint32_t>();
        a.concepts = j.at("concepts").get<std::vector<std::uint32_t>>();
        file.abs.push_back(std::move(a));
      } else if (t == "rel") {
        RawRel r;
        r.src = j.at("src").get<std::uint32_t>();
        r.via = j.at("via").get<std::uint32_t>();
        std::string tk = j.at("tkind").get<std::string>();
        if (tk != "op" && tk != "concept")
          throw ParseError("line " + std::to_string(line_no) + ": unknown target kind '" + tk + "'");
        r.target_is_op = tk == "op";
        r.tgt = j.at("tgt").get<std::uint32_t>();
        r.eq = j.at("eq").get<bool>();
        file.rels.push_back(std::move(r));
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": unknown record type '" + t + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw ParseError("missing model header");
  return file;
}

namespace {

std::string raw_op_repr(const RawOp& op) {
  std::string s = kind_tag(op.kind);
  if (op.kind != CompKind::Primitive) {
    s += op.kind == CompKind::Sequence ? "<" : "{";
    for (std::size_t i = 0; i < op.elems.size(); ++i) {
      if (i) s += ",";
      s += "#" + std::to_string(op.elems[i]);
    }
    s += op.kind == CompKind::Sequence ? ">" : "}";
  }
  if (op.name) s += " name=\"" + *op.name + "\"";
  return "op #" + std::to_string(op.id) + " := " + s;
}

bool same_structure(const RawOp& a, const RawOp& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == CompKind::Primitive) return a.name == b.name;
  std::vector<std::uint32_t> ea = a.elems, eb = b.elems;
  if (a.kind == CompKind::Set) {
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
  }
  return ea == eb;
}

}  // namespace

std::vector<Contradiction> identity_conflicts(const ModelFile& file) {
  std::vector<Contradiction> out;
  std::map<std::uint32_t, const RawOp*> by_id;
  std::map<std::string, const RawOp*> by_name;
  for (const RawOp& op : file.ops) {
    if (auto [it, fresh] = by_id.emplace(op.id, &op); !fresh) {
      if (!same_structure(*it->second, op))
        out.push_back({Contradiction::Kind::IdentityConflict, raw_op_repr(*it->second), raw_op_repr(op)});
      continue;
    }
    if (op.name) {
      if (auto [it, fresh] = by_name.emplace(*op.name, &op); !fresh) {
        if (!same_structure(*it->second, op))
          out.push_back({Contradiction::Kind::IdentityConflict, raw_op_repr(*it->second), raw_op_repr(op)});
      }
    }
  }
  return out;
}

Model hydrate(const ModelFile& file) {
  Registry reg;
  try {
    for (const RawOp& op : file.ops) {
      if (op.id != reg.size())
        throw ParseError("op ids must be dense and ascending; got #" + std::to_string(op.id));
      std::vector<OperationId> elems;
      for (std::uint32_t e : op.elems) {
        if (e >= op.id) throw ParseError("op #" + std::to_string(op.id) + " has a forward or self reference");
        elems.push_back(OperationId{e});
      }
      switch (op.kind) {
        case CompKind::Primitive:
          reg.add(Composition::primitive(), op.name);
          break;
        case CompKind::Sequence:
          reg.add(Composition::sequence(std::move(elems)), op.name);
          break;
        case CompKind::Set:
          reg.add(Composition::set(std::move(elems)), op.name);
          break;
      }
    }

    ConceptStore store;
    for (const RawConcept& rc : file.concepts) {
      if (rc.id != store.size())
        throw ParseError("concept ids must be dense and ascending; got C" + std::to_string(rc.id));
      Concept c;
      switch (rc.kind) {
        case ConceptKind::WithinOp: {
          if (rc.op >= reg.size()) throw ParseError("concept C" + std::to_string(rc.id) + ": unknown op");
          c = Concept::within_op(OperationId{rc.op});
          break;
        }
        case ConceptKind::SeqContext: {
          std::vector<OperationId> slots;
          for (std::uint32_t s : rc.slots) {
            if (s != kInvalidId && s >= reg.size())
              throw ParseError("concept C" + std::to_string(rc.id) + ": unknown op in slots");
            slots.push_back(OperationId{s});
          }
          c = Concept::seq_context(std::move(slots));
          break;
        }
        case ConceptKind::SetContext: {
          std::vector<OperationId> co;
          for (std::uint32_t m : rc.co) {
            if (m >= reg.size()) throw ParseError("concept C" + std::to_string(rc.id) + ": unknown op in co");
            co.push_back(OperationId{m});
          }
          c = Concept::set_context(std::move(co));
          break;
        }
      }
      ConceptId assigned = store.intern(c);
      if (assigned.value != rc.id)
        throw ParseError("duplicate concept record C" + std::to_string(rc.id));
    }

    std::vector<GroundAxiom> ground;
    for (const RawGround& rg : file.ground) {
      GroundAxiom g;
      g.kind = rg.kind;
      g.source = rg.source;
      if (rg.kind != GroundAxiom::Kind::AssumeMeaningful) {
        if (rg.op >= reg.size()) throw ParseError("ground record references unknown op");
        g.op = OperationId{rg.op};
      }
      if (rg.kind == GroundAxiom::Kind::AssertedSatisfaction) {
        if (rg.concept_id >= store.size()) throw ParseError("ground record references unknown concept");
        g.concept_id = ConceptId{rg.concept_id};
      }
      ground.push_back(std::move(g));
    }

    AbstractionIndex abs;
    for (const RawAbs& ra : file.abs) {
      if (ra.obj >= reg.size()) throw ParseError("abs record references unknown op");
      auto& slot = abs[OperationId{ra.obj}];
      for (std::uint32_t c : ra.concepts) {
        if (c >= store.size()) throw ParseError("abs record references unknown concept");
        slot.insert(ConceptId{c});
      }
    }

    return Model::restore(file.config, std::move(reg), std::move(store), std::move(ground), std::move(abs));
  } catch (const MalformedConceptError& e) {
    throw ParseError(e.what());
  } catch (const UnknownIdError& e) {
    throw ParseError(e.what());
  } catch (const UnknownComponentError& e) {
    throw ParseError(e.what());
  } catch (const EmptyCompositionError& e) {
    throw ParseError(e.what());
  }
}

std::vector<Contradiction> check_file(const ModelFile& file) {
  std::vector<Contradiction> out = identity_conflicts(file);
  if (!out.empty()) return out;
  Model m = hydrate(file);
  out = m.check();
  for (const RawRel& rr : file.rels) {
    if (rr.src >= m.registry().size() || rr.via >= m.concepts().size()) {
      out.push_back({Contradiction::Kind::RefutedSatisfaction, "model inventory",
                     "rel record with unknown ids"});
      continue;
    }
    Relation r;
    r.source = OperationId{rr.src};
    r.via = ConceptId{rr.via};
    r.target = rr.target_is_op ? TargetRef::op(OperationId{rr.tgt}) : TargetRef::concept_ref(ConceptId{rr.tgt});
    r.equivalence = rr.eq;
    if ((rr.target_is_op && rr.tgt >= m.registry().size()) ||
        (!rr.target_is_op && rr.tgt >= m.concepts().size())) {
      out.push_back({Contradiction::Kind::RefutedSatisfaction, "model inventory",
                     "rel record with unknown target"});
      continue;
    }
    if (auto contra = m.relation_refutation(r)) out.push_back(std::move(*contra));
  }
  return out;
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  ModelFile file = parse_model_stream(in);
  auto conflicts = identity_conflicts(file);
  if (!conflicts.empty()) throw ContradictionError(conflicts.front());
  return hydrate(file);
}

void save_model_file(const std::string& path, const Model& model, bool canonical) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write model file: " + tmp.string());
    write_model(out, model, canonical);
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot replace model file " + path + ": " + ec.message());
  }
}

}  // namespace coab::io
