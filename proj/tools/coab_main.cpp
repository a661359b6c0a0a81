#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coab/engine.hpp"
#include "coab/ingest.hpp"
#include "coab/model.hpp"
#include "coab/model_io.hpp"
#include "coab/render.hpp"

using nlohmann::json;

namespace {

// Exit codes, fixed for scriptability:
//   0 ok, 1 I/O, 2 contradiction, 3 malformed input, 4 unknown name,
//   5 not satisfied.
enum ExitCode : int {
  kOk = 0,
  kIo = 1,
  kContradiction = 2,
  kMalformed = 3,
  kUnknownName = 4,
  kNotSatisfied = 5,
};

struct Options {
  std::string model_path;
  std::string corpus_path;
  std::string spec_path;
  std::string out_path;
  std::string format = "text";
  std::string context;
  std::string concept_ref;
  std::vector<std::string> args;
  std::string line;
  std::int64_t window = 0;
  std::int64_t depth = -2;  // -2 = not given
  bool no_lowercase = false;
  bool whitespace_only = false;
  bool canonical = false;
  bool no_relations = false;
};

coab::TokenizerConfig tokenizer_config(const Options& opt) {
  coab::TokenizerConfig cfg;
  cfg.lowercase = !opt.no_lowercase;
  cfg.detach_punctuation = !opt.whitespace_only;
  if (opt.window > 0) cfg.window = static_cast<std::uint32_t>(opt.window);
  return cfg;
}

coab::OperationId resolve_op(const coab::Model& model, const std::string& name) {
  if (auto id = model.registry().find_by_name(name)) return *id;
  if (name.size() > 1 && name[0] == '#') {
    try {
      std::uint32_t v = static_cast<std::uint32_t>(std::stoul(name.substr(1)));
      if (model.registry().known(coab::OperationId{v})) return coab::OperationId{v};
    } catch (const std::exception&) {
    }
  }
  throw coab::UnknownNameError("unknown operation name: " + name);
}

coab::ConceptId resolve_concept(const coab::Model& model, const std::string& ref) {
  std::string digits = ref;
  if (!digits.empty() && (digits[0] == 'C' || digits[0] == 'c')) digits.erase(0, 1);
  if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
    std::uint32_t v = static_cast<std::uint32_t>(std::stoul(digits));
    if (model.concepts().known(coab::ConceptId{v})) return coab::ConceptId{v};
  }
  throw coab::UnknownNameError("unknown concept: " + ref);
}

std::string concept_label(const coab::Model& model, coab::ConceptId c) {
  return "C" + std::to_string(c.value) + " " +
         coab::render_concept(model.registry(), model.concepts().get(c));
}

json concept_json(const coab::Model& model, coab::ConceptId c) {
  const coab::Concept& cc = model.concepts().get(c);
  json j{{"id", c.value}, {"render", coab::render_concept(model.registry(), cc)}};
  switch (cc.kind) {
    case coab::ConceptKind::WithinOp:
      j["kind"] = "within";
      j["op"] = cc.within.value;
      break;
    case coab::ConceptKind::SeqContext: {
      j["kind"] = "seqctx";
      json slots = json::array();
      for (std::uint32_t i = 0; i < cc.slots.size(); ++i) {
        if (i == cc.hole)
          slots.push_back(nullptr);
        else
          slots.push_back(cc.slots[i].value);
      }
      j["slots"] = std::move(slots);
      break;
    }
    case coab::ConceptKind::SetContext: {
      j["kind"] = "setctx";
      std::vector<std::uint32_t> co;
      for (coab::OperationId m : cc.co_members) co.push_back(m.value);
      j["co"] = co;
      break;
    }
  }
  return j;
}

json target_json(const coab::Model& model, const coab::TargetRef& t) {
  if (t.is_op())
    return json{{"kind", "op"},
                {"id", t.id},
                {"render", coab::render_op_ref(model.registry(), coab::OperationId{t.id})}};
  return json{{"kind", "concept"}, {"id", t.id}};
}

coab::Model load_model(const Options& opt) {
  if (opt.model_path.empty()) throw coab::IoError("--model is required");
  return coab::io::load_model_file(opt.model_path);
}

int cmd_ingest(const Options& opt) {
  if (opt.corpus_path.empty() == opt.spec_path.empty())
    throw coab::ParseError("ingest needs exactly one of --corpus or --spec");
  if (opt.model_path.empty()) throw coab::IoError("--model is required");

  coab::Model model = [&] {
    std::ifstream probe(opt.model_path);
    if (probe.good()) {
      probe.close();
      return coab::io::load_model_file(opt.model_path);
    }
    coab::ModelConfig cfg;
    if (opt.depth != -2) cfg.decomposition_depth = opt.depth;
    cfg.include_relations = !opt.no_relations;
    return coab::Model(cfg);
  }();

  coab::IngestStats stats;
  const std::string& input_path = opt.corpus_path.empty() ? opt.spec_path : opt.corpus_path;
  std::ifstream in(input_path);
  if (!in) throw coab::IoError("cannot open input file: " + input_path);
  if (!opt.corpus_path.empty()) {
    stats = coab::ingest_corpus(model, in, tokenizer_config(opt), input_path);
  } else {
    stats = coab::ingest_opspec(model, in);
  }
  coab::io::save_model_file(opt.model_path, model);

  if (opt.format == "structured") {
    json j{{"lines_read", stats.lines_read},
           {"sentences_registered", stats.sentences_registered},
           {"tokens_registered", stats.tokens_registered},
           {"concepts_derived", stats.concepts_derived},
           {"abstractions_inserted", stats.abstractions_inserted},
           {"invalid_bytes", stats.invalid_bytes},
           {"operations", model.registry().size()},
           {"concepts", model.concepts().size()}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "lines_read:            " << stats.lines_read << "\n"
              << "sentences_registered:  " << stats.sentences_registered << "\n"
              << "tokens_registered:     " << stats.tokens_registered << "\n"
              << "concepts_derived:      " << stats.concepts_derived << "\n"
              << "abstractions_inserted: " << stats.abstractions_inserted << "\n"
              << "model: " << opt.model_path << " (" << model.registry().size() << " operations, "
              << model.concepts().size() << " concepts)\n";
  }
  return kOk;
}

int cmd_abstract(const Options& opt) {
  coab::Model model = load_model(opt);
  if (opt.args.empty()) throw coab::ParseError("abstract needs an operation name");
  coab::OperationId obj = resolve_op(model, opt.args[0]);
  auto scope = model.all_operations();
  coab::Abstraction a = abstract_over(model.registry(), model.concepts(), obj, scope);

  if (opt.format == "structured") {
    json concepts = json::array();
    for (coab::ConceptId c : a.concepts) {
      json cj = concept_json(model, c);
      json wits = json::array();
      for (const coab::Witness& w : witnesses_of(model.registry(), model.concepts(), obj, c))
        wits.push_back(json{{"encloser", w.encloser.value}, {"slot", coab::render_slot(w.slot)}});
      cj["witnesses"] = std::move(wits);
      concepts.push_back(std::move(cj));
    }
    std::cout << json{{"object", obj.value},
                      {"render", coab::render_op_ref(model.registry(), obj)},
                      {"concepts", concepts}}
                     .dump()
              << "\n";
  } else {
    std::cout << "abstraction of " << coab::render_op_ref(model.registry(), obj) << " (#" << obj.value
              << "): " << a.concepts.size() << " concept(s)\n";
    for (coab::ConceptId c : a.concepts) {
      std::cout << "  " << concept_label(model, c);
      auto wits = witnesses_of(model.registry(), model.concepts(), obj, c);
      std::cout << "  [";
      for (std::size_t i = 0; i < wits.size(); ++i) {
        if (i) std::cout << "; ";
        std::cout << "in " << coab::render_op_ref(model.registry(), wits[i].encloser) << " "
                  << coab::render_slot(wits[i].slot);
      }
      std::cout << "]\n";
    }
  }
  return kOk;
}

void print_ops(const coab::Model& model, const std::vector<coab::OperationId>& ops, const Options& opt) {
  if (opt.format == "structured") {
    json arr = json::array();
    for (coab::OperationId o : ops)
      arr.push_back(json{{"id", o.value}, {"render", coab::render_op_ref(model.registry(), o)}});
    std::cout << json{{"results", arr}}.dump() << "\n";
  } else {
    for (coab::OperationId o : ops) std::cout << coab::render_op_ref(model.registry(), o) << "\n";
  }
}

int cmd_query_relate(const Options& opt) {
  coab::Model model = load_model(opt);
  if (opt.args.empty()) throw coab::ParseError("query relate needs an operation name");
  coab::OperationId lambda = resolve_op(model, opt.args[0]);
  if (opt.context.empty()) throw coab::ParseError("query relate needs --context");

  std::vector<coab::OperationId> out;
  bool as_concept = false;
  if (!opt.context.empty() && (opt.context[0] == 'C' || opt.context[0] == 'c') &&
      opt.context.find_first_not_of("0123456789", 1) == std::string::npos) {
    as_concept = true;
  }
  if (as_concept) {
    out = contextual_relation(model, lambda, resolve_concept(model, opt.context));
  } else {
    out = contextual_relation(model, lambda, resolve_op(model, opt.context));
  }
  print_ops(model, out, opt);
  return kOk;
}

int cmd_query_class(const Options& opt) {
  coab::Model model = load_model(opt);
  if (opt.args.empty()) throw coab::ParseError("query class needs an operation name");
  coab::OperationId obj = resolve_op(model, opt.args[0]);
  if (opt.concept_ref.empty()) throw coab::ParseError("query class needs --concept");
  coab::ConceptId c = resolve_concept(model, opt.concept_ref);
  auto members = equivalence_class(model.registry(), model.concepts(), obj, c);
  print_ops(model, members, opt);
  return kOk;
}

int cmd_query_distinguish(const Options& opt) {
  coab::Model model = load_model(opt);
  if (opt.args.size() < 2) throw coab::ParseError("query distinguish needs two operation names");
  coab::OperationId a = resolve_op(model, opt.args[0]);
  coab::OperationId b = resolve_op(model, opt.args[1]);
  coab::DistinguishResult res =
      distinguish(model.registry(), model.concepts(), model.abstractions(), a, b);

  if (opt.format == "structured") {
    json marks = json::array();
    for (const coab::DistinguishingMark& m : res.marks) {
      json mj{{"owner", coab::render_op_ref(model.registry(), m.owner)}};
      if (m.kind == coab::DistinguishingMark::Kind::ConceptMark) {
        mj["kind"] = "concept";
        mj["concept"] = concept_json(model, m.concept_id);
      } else {
        mj["kind"] = "relation";
        mj["via"] = m.relation.via.value;
        mj["target"] = target_json(model, m.relation.target);
      }
      marks.push_back(std::move(mj));
    }
    std::cout << json{{"distinguishable", res.distinguishable}, {"marks", marks}}.dump() << "\n";
  } else {
    std::cout << (res.distinguishable ? "distinguishable" : "indistinguishable") << "\n";
    for (const coab::DistinguishingMark& m : res.marks) {
      if (m.kind == coab::DistinguishingMark::Kind::ConceptMark) {
        std::cout << "  only " << coab::render_op_ref(model.registry(), m.owner) << ": "
                  << concept_label(model, m.concept_id) << "\n";
      } else {
        std::cout << "  only " << coab::render_op_ref(model.registry(), m.owner) << ": relation -[C"
                  << m.relation.via.value << "]-> "
                  << (m.relation.target.is_op()
                          ? coab::render_op_ref(model.registry(), coab::OperationId{m.relation.target.id})
                          : concept_label(model, coab::ConceptId{m.relation.target.id}))
                  << "\n";
      }
    }
  }
  return kOk;
}

int cmd_query_meaningful(const Options& opt) {
  coab::Model model = load_model(opt);
  std::string line = opt.line;
  if (line.empty() && !opt.args.empty()) {
    for (std::size_t i = 0; i < opt.args.size(); ++i) {
      if (i) line += ' ';
      line += opt.args[i];
    }
  }
  coab::MeaningfulnessReport rep = meaningfulness_check(model, line, tokenizer_config(opt));

  if (opt.format == "structured") {
    json positions = json::array();
    for (std::size_t i = 0; i < rep.positions.size(); ++i) {
      const auto& p = rep.positions[i];
      json pj{{"pos", i}, {"token", p.token}, {"supported", p.supported()}};
      std::vector<std::uint32_t> cs;
      for (coab::ConceptId c : p.supports) cs.push_back(c.value);
      pj["supports"] = cs;
      positions.push_back(std::move(pj));
    }
    std::cout << json{{"meaningful", rep.meaningful}, {"empty", rep.empty_line}, {"positions", positions}}.dump()
              << "\n";
  } else {
    std::cout << (rep.meaningful ? "meaningful" : "not meaningful") << (rep.empty_line ? " (empty)" : "")
              << "\n";
    for (std::size_t i = 0; i < rep.positions.size(); ++i) {
      const auto& p = rep.positions[i];
      std::cout << "  pos " << i << " \"" << p.token << "\": ";
      if (p.supported()) {
        for (std::size_t k = 0; k < p.supports.size(); ++k)
          std::cout << (k ? ", " : "") << "C" << p.supports[k].value;
      } else {
        std::cout << "no support";
      }
      std::cout << "\n";
    }
  }
  return kOk;
}

int cmd_check(const Options& opt) {
  if (opt.model_path.empty()) throw coab::IoError("--model is required");
  std::ifstream in(opt.model_path);
  if (!in) throw coab::IoError("cannot open model file: " + opt.model_path);
  coab::io::ModelFile file = coab::io::parse_model_stream(in);
  std::vector<coab::Contradiction> report = coab::io::check_file(file);
  if (opt.format == "structured") {
    json arr = json::array();
    for (const coab::Contradiction& c : report)
      arr.push_back(json{{"kind", c.kind == coab::Contradiction::Kind::IdentityConflict ? "identity_conflict"
                                                                                        : "refuted_satisfaction"},
                         {"existing", c.existing},
                         {"offered", c.offered}});
    std::cout << json{{"consistent", report.empty()}, {"contradictions", arr}}.dump() << "\n";
  } else {
    if (report.empty()) {
      std::cout << "consistent\n";
    } else {
      for (const coab::Contradiction& c : report)
        std::cout << "contradiction: " << c.offered << "  vs  " << c.existing << "\n";
    }
  }
  return report.empty() ? kOk : kContradiction;
}

int cmd_export(const Options& opt) {
  coab::Model model = load_model(opt);
  if (opt.out_path.empty() || opt.out_path == "-") {
    coab::io::write_model(std::cout, model, opt.canonical);
  } else {
    std::ofstream out(opt.out_path, std::ios::trunc);
    if (!out) throw coab::IoError("cannot write: " + opt.out_path);
    coab::io::write_model(out, model, opt.canonical);
  }
  return kOk;
}

int cmd_import(const Options& opt) {
  if (opt.model_path.empty()) throw coab::IoError("--model is required");
  if (opt.args.empty()) throw coab::ParseError("import needs an input file argument");
  std::ifstream in(opt.args[0]);
  if (!in) throw coab::IoError("cannot open input file: " + opt.args[0]);
  coab::io::ModelFile file = coab::io::parse_model_stream(in);
  auto conflicts = coab::io::identity_conflicts(file);
  if (!conflicts.empty()) throw coab::ContradictionError(conflicts.front());
  coab::Model model = coab::io::hydrate(file);
  coab::io::save_model_file(opt.model_path, model);
  std::cout << "imported " << model.registry().size() << " operations, " << model.concepts().size()
            << " concepts\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computable-abstraction models over registered operations"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", opt.model_path, "model file path");
    cmd->add_option("--format", opt.format, "output format: text | structured")
        ->check(CLI::IsMember({"text", "structured"}));
  };
  auto add_tok = [&](CLI::App* cmd) {
    cmd->add_option("--window", opt.window, "also register n-token subsequences (n >= 2)");
    cmd->add_flag("--no-lowercase", opt.no_lowercase, "keep original case");
    cmd->add_flag("--whitespace-only", opt.whitespace_only, "do not detach punctuation");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "read a corpus or operation-spec file into a model");
  add_common(ingest);
  add_tok(ingest);
  ingest->add_option("--corpus", opt.corpus_path, "corpus file: one sentence per line");
  ingest->add_option("--spec", opt.spec_path, "operation-spec file: prim/seq/set declarations");
  ingest->add_option("--depth", opt.depth, "decomposition depth recorded in new models (-1 = unlimited)");
  ingest->add_flag("--no-relations", opt.no_relations, "exclude derived relations from exports");

  CLI::App* abstract_cmd = app.add_subcommand("abstract", "show the concepts an operation satisfies");
  add_common(abstract_cmd);
  abstract_cmd->add_option("name", opt.args, "operation name (or #id)");

  CLI::App* query = app.add_subcommand("query", "run a query against a model");
  CLI::App* relate = query->add_subcommand("relate", "objects related to NAME within a context");
  add_common(relate);
  relate->add_option("name", opt.args, "operation name");
  relate->add_option("--context", opt.context, "concept (C<n>) or operation name");
  CLI::App* clazz = query->add_subcommand("class", "equivalence class of NAME under a concept");
  add_common(clazz);
  clazz->add_option("name", opt.args, "operation name");
  clazz->add_option("--concept", opt.concept_ref, "concept id (C<n>)");
  CLI::App* disting = query->add_subcommand("distinguish", "profile differences between two operations");
  add_common(disting);
  disting->add_option("names", opt.args, "two operation names");
  CLI::App* meaningful = query->add_subcommand("meaningful", "judge a line against the model");
  add_common(meaningful);
  add_tok(meaningful);
  meaningful->add_option("line", opt.args, "the line to judge");
  query->require_subcommand(1);

  CLI::App* check = app.add_subcommand("check", "verify model-file consistency");
  add_common(check);

  CLI::App* export_cmd = app.add_subcommand("export", "serialize a model deterministically");
  add_common(export_cmd);
  export_cmd->add_option("--out", opt.out_path, "output path (default stdout)");
  export_cmd->add_flag("--canonical", opt.canonical, "renumber ids by structure");

  CLI::App* import_cmd = app.add_subcommand("import", "load a model stream and save it as a model file");
  add_common(import_cmd);
  import_cmd->add_option("input", opt.args, "input stream file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kMalformed;
  }

  try {
    if (app.got_subcommand(ingest)) return cmd_ingest(opt);
    if (app.got_subcommand(abstract_cmd)) return cmd_abstract(opt);
    if (app.got_subcommand(query)) {
      if (query->got_subcommand(relate)) return cmd_query_relate(opt);
      if (query->got_subcommand(clazz)) return cmd_query_class(opt);
      if (query->got_subcommand(disting)) return cmd_query_distinguish(opt);
      if (query->got_subcommand(meaningful)) return cmd_query_meaningful(opt);
    }
    if (app.got_subcommand(check)) return cmd_check(opt);
    if (app.got_subcommand(export_cmd)) return cmd_export(opt);
    if (app.got_subcommand(import_cmd)) return cmd_import(opt);
  } catch (const coab::ContradictionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kContradiction;
  } catch (const coab::NotSatisfiedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotSatisfied;
  } catch (const coab::UnknownNameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnknownName;
  } catch (const coab::UnknownIdError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnknownName;
  } catch (const coab::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const coab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const coab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
