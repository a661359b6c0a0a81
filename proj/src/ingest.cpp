#include "coab/ingest.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>

#include "coab/engine.hpp"
#include "coab/render.hpp"

namespace coab {

IngestStats& IngestStats::operator+=(const IngestStats& o) {
  lines_read += o.lines_read;
  sentences_registered += o.sentences_registered;
  tokens_registered += o.tokens_registered;
  concepts_derived += o.concepts_derived;
  abstractions_inserted += o.abstractions_inserted;
  invalid_bytes += o.invalid_bytes;
  return *this;
}

void abstract_components_of(Model& model, OperationId op, IngestStats& stats) {
  const Operation& o = model.registry().get(op);
  if (o.composition.kind == CompKind::Primitive) return;
  SlotKind sk = o.composition.kind == CompKind::Sequence ? SlotKind::SeqPos : SlotKind::SetMember;

  std::map<OperationId, std::vector<Slot>> by_component;
  for (std::uint32_t i = 0; i < o.composition.elements.size(); ++i)
    by_component[o.composition.elements[i]].push_back(Slot{sk, i});

  ConceptId within = *model.concepts().find(Concept::within_op(op));
  for (const auto& [component, slots] : by_component) {
    Abstraction a;
    a.object = component;
    std::set<ConceptId> cs{within};
    for (Slot s : slots) cs.insert(*model.concepts().find(context_concept(o.composition, s)));
    a.concepts.assign(cs.begin(), cs.end());
    a.scope.push_back(op);
    InsertResult res = model.insert(a);
    if (!res.accepted())
      throw ContradictionError(*res.rejected);  // cannot happen for freshly derived facts
    if (res.changed) ++stats.abstractions_inserted;
  }
}

namespace {

// Registers a composite and runs the abstraction step for its components
// when it is new. Sets get their derived concepts too, but corpus ingestion
// only ever builds sequences.
OperationId define_and_abstract(Model& model, CompKind kind, std::vector<OperationId> comps,
                                std::optional<std::string> name, bool as_seed, IngestStats& stats,
                                bool& created) {
  std::size_t concepts_before = model.concepts().size();
  DefineResult res = model.define_composite(kind, std::move(comps), std::move(name), as_seed);
  if (!res.accepted()) throw ContradictionError(*res.rejected);
  created = res.created;
  if (res.created) {
    stats.concepts_derived += model.concepts().size() - concepts_before;
    abstract_components_of(model, res.id, stats);
  }
  return res.id;
}

}  // namespace

std::optional<OperationId> ingest_line(Model& model, std::string_view line,
                                       const TokenizerConfig& config, IngestStats& stats) {
  TokenizeResult tok = tokenize(line, config);
  stats.invalid_bytes += tok.invalid_bytes;
  if (tok.tokens.empty()) return std::nullopt;
  if (config.window && *config.window < 2) throw Error("window must be >= 2");

  std::vector<OperationId> token_ids;
  token_ids.reserve(tok.tokens.size());
  for (const std::string& t : tok.tokens) {
    DefineResult res = model.define_primitive(t);
    if (!res.accepted()) throw ContradictionError(*res.rejected);
    if (res.created) ++stats.tokens_registered;
    token_ids.push_back(res.id);
  }

  std::string joined;
  for (std::size_t i = 0; i < tok.tokens.size(); ++i) {
    if (i) joined += ' ';
    joined += tok.tokens[i];
  }

  bool created = false;
  // Single-token sentences stay unnamed: the joined text is already bound to
  // the token primitive itself.
  std::optional<std::string> sentence_name;
  if (token_ids.size() > 1) sentence_name = joined;
  OperationId sentence =
      define_and_abstract(model, CompKind::Sequence, token_ids, std::move(sentence_name), false, stats, created);
  if (created) ++stats.sentences_registered;  // n-gram windows below are not sentences

  if (config.window && token_ids.size() > *config.window) {
    std::uint32_t n = *config.window;
    for (std::uint32_t start = 0; start + n <= token_ids.size(); ++start) {
      std::vector<OperationId> sub(token_ids.begin() + start, token_ids.begin() + start + n);
      std::string sub_name;
      for (std::uint32_t k = 0; k < n; ++k) {
        if (k) sub_name += ' ';
        sub_name += tok.tokens[start + k];
      }
      bool sub_created = false;
      define_and_abstract(model, CompKind::Sequence, std::move(sub), sub_name, false, stats, sub_created);
    }
  }
  return sentence;
}

IngestStats ingest_corpus(Model& model, std::istream& in, const TokenizerConfig& config,
                          const std::string& source_label) {
  model.assume_meaningful(source_label);
  IngestStats stats;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++stats.lines_read;
    if (!line.empty() && line[0] == '#') continue;
    ingest_line(model, line, config, stats);
  }
  return stats;
}

namespace {

// name := bare word | "..." with \" and \\ escapes
std::vector<std::string> split_spec_fields(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    if (line[i] == '"') {
      std::string f;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char c = line[i++];
        if (c == '\\' && i < line.size() && (line[i] == '"' || line[i] == '\\')) {
          f += line[i++];
        } else if (c == '"') {
          closed = true;
          break;
        } else {
          f += c;
        }
      }
      if (!closed) throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
      fields.push_back(std::move(f));
    } else {
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      fields.push_back(line.substr(start, i - start));
    }
  }
  return fields;
}

}  // namespace

IngestStats ingest_opspec(Model& model, std::istream& in) {
  IngestStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++stats.lines_read;
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed[0] == '#') continue;

    std::vector<std::string> fields = split_spec_fields(line, line_no);
    const std::string& head = fields[0];
    if (head == "prim") {
      if (fields.size() != 2)
        throw ParseError("line " + std::to_string(line_no) + ": expected 'prim <name>'");
      DefineResult res = model.define_primitive(fields[1], true);
      if (!res.accepted()) throw ContradictionError(*res.rejected);
      if (res.created) ++stats.tokens_registered;
    } else if (head == "seq" || head == "set") {
      if (fields.size() < 4 || fields[2] != "=")
        throw ParseError("line " + std::to_string(line_no) + ": expected '" + head + " <name> = <name>...'");
      std::vector<OperationId> comps;
      for (std::size_t k = 3; k < fields.size(); ++k) {
        auto id = model.registry().find_by_name(fields[k]);
        if (!id)
          throw ParseError("line " + std::to_string(line_no) + ": undeclared name \"" + fields[k] + "\"");
        comps.push_back(*id);
      }
      std::size_t concepts_before = model.concepts().size();
      DefineResult res = model.define_composite(head == "seq" ? CompKind::Sequence : CompKind::Set,
                                                std::move(comps), fields[1], true);
      if (!res.accepted()) throw ContradictionError(*res.rejected);
      if (res.created) {
        ++stats.sentences_registered;
        stats.concepts_derived += model.concepts().size() - concepts_before;
        abstract_components_of(model, res.id, stats);
      }
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown directive '" + head + "'");
    }
  }
  return stats;
}

std::vector<OperationId> contextual_relation(const Model& model, OperationId lambda, ConceptId sigma) {
  auto rels = relations_via(model.registry(), model.concepts(), model.abstractions(), lambda, sigma);
  std::set<OperationId> out;
  for (const Relation& r : rels)
    if (r.target.is_op() && OperationId{r.target.id} != lambda) out.insert(OperationId{r.target.id});
  return {out.begin(), out.end()};
}

std::vector<OperationId> contextual_relation(const Model& model, OperationId lambda, OperationId sigma) {
  const Registry& reg = model.registry();
  reg.get(lambda);
  reg.get(sigma);
  auto targets_of = [&](OperationId x) {
    std::set<TargetRef> t;
    for (const Relation& r : relations_of(reg, model.concepts(), model.abstractions(), x))
      t.insert(r.target);
    return t;
  };
  std::set<TargetRef> lam = targets_of(lambda);
  std::set<TargetRef> sig = targets_of(sigma);
  auto intersects = [](const std::set<TargetRef>& a, const std::set<TargetRef>& b) {
    for (const TargetRef& t : a)
      if (b.contains(t)) return true;
    return false;
  };
  std::vector<OperationId> out;
  for (std::uint32_t i = 0; i < reg.size(); ++i) {
    OperationId x{i};
    if (x == lambda || x == sigma) continue;
    std::set<TargetRef> tx = targets_of(x);
    if (intersects(tx, lam) && intersects(tx, sig)) out.push_back(x);
  }
  return out;
}

MeaningfulnessReport meaningfulness_check(const Model& model, std::string_view line,
                                          const TokenizerConfig& config) {
  MeaningfulnessReport report;
  TokenizeResult tok = tokenize(line, config);
  if (tok.tokens.empty()) {
    report.meaningful = true;
    report.empty_line = true;
    return report;
  }
  const Registry& reg = model.registry();
  const ConceptStore& store = model.concepts();
  std::size_t len = tok.tokens.size();

  for (std::size_t pos = 0; pos < len; ++pos) {
    PositionSupport ps;
    ps.token = tok.tokens[pos];
    auto id = reg.find(Composition::primitive(), ps.token);
    if (id) {
      ps.token_op = *id;
      std::set<ConceptId> supports;
      for (const OccurrenceRecord& occ : reg.occurrences(*id)) {
        if (occ.slot.kind != SlotKind::SeqPos) continue;
        const Operation& encl = reg.get(occ.encloser);
        std::size_t encl_len = encl.composition.elements.size();
        bool aligned = occ.slot.index == pos;
        if (!aligned && config.window && encl_len == *config.window) {
          // window-sized context: any alignment that keeps it inside the line
          if (occ.slot.index <= pos) {
            std::size_t start = pos - occ.slot.index;
            aligned = start + encl_len <= len;
          }
        }
        if (!aligned) continue;
        if (auto cid = store.find(context_concept(encl.composition, occ.slot))) supports.insert(*cid);
      }
      ps.supports.assign(supports.begin(), supports.end());
    }
    report.positions.push_back(std::move(ps));
  }
  report.meaningful = std::all_of(report.positions.begin(), report.positions.end(),
                                  [](const PositionSupport& p) { return p.supported(); });
  return report;
}

}  // namespace coab
