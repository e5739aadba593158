// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nrpq/atm.hpp"
#include "nrpq/evaluator.hpp"
#include "nrpq/grapheval.hpp"
#include "nrpq/horn.hpp"
#include "nrpq/interpretation.hpp"
#include "nrpq/kb.hpp"
#include "nrpq/normalize.hpp"
#include "nrpq/nre.hpp"
#include "nrpq/query.hpp"
#include "nrpq/reductions.hpp"
#include "nrpq/rewriter.hpp"

namespace nrpq {
namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw ParseError("cannot write '" + path + "'");
}

// Wall-clock phases for the optional timings block. Timings are excluded
// from default output so that identical inputs keep byte-identical results.
class Stopwatch {
 public:
  void mark(const std::string& phase) {
    auto now = std::chrono::steady_clock::now();
    phases_.emplace_back(
        phase,
        std::chrono::duration_cast<std::chrono::milliseconds>(now - last_)
            .count());
    last_ = now;
  }

  json to_json() const {
    json t = json::object();
    for (const auto& [phase, ms] : phases_) t[phase] = ms;
    return t;
  }

  void print(std::ostream& out) const {
    for (const auto& [phase, ms] : phases_)
      out << "# " << phase << "_ms " << ms << "\n";
  }

 private:
  std::chrono::steady_clock::time_point last_ =
      std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, int64_t>> phases_;
};

std::vector<std::vector<std::string>> sorted_name_tuples(
    const std::set<std::vector<IndId>>& answers, const Vocabulary& vocab) {
  std::vector<std::vector<std::string>> out;
  out.reserve(answers.size());
  for (const auto& tup : answers) {
    std::vector<std::string> names;
    names.reserve(tup.size());
    for (IndId a : tup) names.push_back(vocab.ind_name(a));
    out.push_back(std::move(names));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void emit_tuples(const std::vector<std::vector<std::string>>& tuples,
                 std::ostream& out) {
  for (const auto& tup : tuples) {
    for (size_t i = 0; i < tup.size(); ++i) {
      if (i > 0) out << ",";
      out << tup[i];
    }
    out << "\n";
  }
}

// Shared tail of `answer` and `eval-graph`: boolean queries print a truth
// value, open queries one tuple per line in lexicographic order.
void emit_answers(const RunConfig& cfg, const CN2RPQ& q,
                  const std::vector<std::vector<std::string>>& tuples,
                  bool boolean_value, const Stopwatch& watch,
                  const char* engine, std::ostream& out) {
  if (cfg.output == OutputMode::Json) {
    json doc;
    doc["engine"] = engine;
    doc["answers"] = tuples;
    if (q.boolean()) doc["boolean"] = boolean_value;
    if (cfg.timings) doc["timings_ms"] = watch.to_json();
    out << doc.dump(2) << "\n";
    return;
  }
  if (q.boolean()) {
    out << (boolean_value ? "true" : "false") << "\n";
  } else {
    emit_tuples(tuples, out);
  }
  if (cfg.timings) watch.print(out);
}

int do_answer_rewrite(const RunConfig& cfg, const KB& kb, const CN2RPQ& q,
                      Stopwatch& watch, std::ostream& out) {
  NormalizedKB nkb = normalize(kb);
  bool boolean_value = false;
  std::vector<std::vector<std::string>> tuples;
  if (q.boolean()) {
    boolean_value = eval_query(q, nkb);
  } else {
    tuples = sorted_name_tuples(certain_answers(q, nkb), *kb.vocab);
  }
  watch.mark("answer");
  emit_answers(cfg, q, tuples, boolean_value, watch, "rewrite", out);
  return 0;
}

int do_answer_reduction(const RunConfig& cfg, const KB& kb, const CN2RPQ& q,
                        Stopwatch& watch, std::ostream& out) {
  if (q.atoms.size() != 1 || q.atoms[0].kind != QueryAtom::Kind::Role)
    throw ParseError(
        "engine 'reduction' handles exactly one expression atom; use "
        "--engine rewrite for conjunctive or concept queries");
  if (!existential_vars(q).empty())
    throw ParseError(
        "engine 'reduction' requires every variable of the atom to be an "
        "answer variable");
  const QueryAtom& atom = q.atoms[0];
  NormalizedKB nkb = normalize(kb);
  Engine engine(nkb);
  std::set<std::vector<IndId>> answers;
  const std::vector<IndId>& inds = nkb.individuals;
  auto record = [&](IndId a, IndId b) {
    std::map<std::string, IndId> env{{atom.from.var, a}, {atom.to.var, b}};
    std::vector<IndId> tup;
    tup.reserve(q.answer_vars.size());
    for (const std::string& v : q.answer_vars) tup.push_back(env.at(v));
    answers.insert(std::move(tup));
  };
  if (!engine.consistent()) {
    // Inconsistent knowledge bases entail every tuple; the instance-check
    // contract requires consistency, so enumerate directly.
    for (IndId a : inds) {
      for (IndId b : inds) {
        if (atom.from.var == atom.to.var && !(a == b)) continue;
        record(a, b);
      }
    }
  } else {
    for (IndId a : inds) {
      for (IndId b : inds) {
        if (atom.from.var == atom.to.var && !(a == b)) continue;
        if (answer_via_reduction(atom.part, nkb, a, b)) record(a, b);
      }
    }
  }
  watch.mark("answer");
  emit_answers(cfg, q, sorted_name_tuples(answers, *kb.vocab), false, watch,
               "reduction", out);
  return 0;
}

int do_answer_graph(const RunConfig& cfg, const KB& kb, const CN2RPQ& q,
                    Stopwatch& watch, std::ostream& out) {
  bool tbox_empty = kb.tbox.concept_inclusions.empty() &&
                    kb.tbox.role_inclusions.empty() &&
                    kb.tbox.role_disjointness.empty();
  std::optional<FiniteInterpretation> model;
  if (tbox_empty) {
    model = from_plain_kb(kb);
  } else if (cfg.depth >= 0) {
    NormalizedKB nkb = normalize(kb);
    Engine engine(nkb);
    if (!engine.consistent())
      throw ParseError(
          "inconsistent knowledge base: there is no canonical model to "
          "materialize");
    model = engine.reasoner().materialize(cfg.depth);
  } else {
    throw ParseError(
        "engine 'graph' evaluates over a fixed structure: give an "
        "assertions-only input or select a materialization depth with "
        "--depth");
  }
  if (!cfg.out_graph_path.empty())
    spill(cfg.out_graph_path, model->to_plain_text());
  std::set<std::vector<ObjId>> raw = answers_on_interpretation(q, *model);
  bool boolean_value = raw.count({}) > 0;
  std::vector<std::vector<std::string>> tuples;
  for (const auto& tup : raw) {
    std::vector<std::string> names;
    names.reserve(tup.size());
    for (ObjId o : tup) names.push_back(model->object_name(o));
    tuples.push_back(std::move(names));
  }
  std::sort(tuples.begin(), tuples.end());
  watch.mark("answer");
  emit_answers(cfg, q, tuples, boolean_value, watch, "graph", out);
  return 0;
}

int do_answer(const RunConfig& cfg, std::ostream& out) {
  Stopwatch watch;
  KB kb = parse_kb(slurp(cfg.kb_path));
  CN2RPQ q = parse_query(slurp(cfg.query_path), *kb.vocab);
  watch.mark("load");
  switch (cfg.engine) {
    case EngineKind::Rewrite:
      return do_answer_rewrite(cfg, kb, q, watch, out);
    case EngineKind::Reduction:
      return do_answer_reduction(cfg, kb, q, watch, out);
    case EngineKind::Graph:
      return do_answer_graph(cfg, kb, q, watch, out);
  }
  throw InternalError("unhandled engine kind");
}

int do_check_sat(const RunConfig& cfg, std::ostream& out) {
  Stopwatch watch;
  KB kb = parse_kb(slurp(cfg.kb_path));
  watch.mark("load");
  NormalizedKB nkb = normalize(kb);
  Engine engine(nkb);
  bool sat = engine.consistent();
  watch.mark("answer");
  if (cfg.output == OutputMode::Json) {
    json doc;
    doc["sat"] = sat;
    if (cfg.timings) doc["timings_ms"] = watch.to_json();
    out << doc.dump(2) << "\n";
  } else {
    out << (sat ? "sat" : "unsat") << "\n";
    if (cfg.timings) watch.print(out);
  }
  return 0;
}

int do_rewrite(const RunConfig& cfg, std::ostream& out) {
  Stopwatch watch;
  KB kb = parse_kb(slurp(cfg.kb_path));
  CN2RPQ parsed = parse_query(slurp(cfg.query_path), *kb.vocab);
  watch.mark("load");
  auto [q, facts] = eliminate_nominal_tests(parsed, *kb.vocab);
  (void)facts;  // markers are plain concept tests to the rewriter
  NormalizedKB nkb = normalize(kb);
  Engine engine(nkb);
  std::vector<CN2RPQ> rewriting = engine.rewriting(q);
  std::sort(rewriting.begin(), rewriting.end(),
            [&](const CN2RPQ& l, const CN2RPQ& r) {
              return canonical_query_form(l, *kb.vocab) <
                     canonical_query_form(r, *kb.vocab);
            });
  watch.mark("answer");
  if (cfg.output == OutputMode::Json) {
    json doc;
    doc["engine"] = "rewrite";
    json queries = json::array();
    for (const CN2RPQ& m : rewriting)
      queries.push_back(print_query(m, *kb.vocab));
    doc["queries"] = queries;
    if (cfg.timings) doc["timings_ms"] = watch.to_json();
    out << doc.dump(2) << "\n";
  } else {
    for (const CN2RPQ& m : rewriting) out << print_query(m, *kb.vocab) << "\n";
    if (cfg.timings) watch.print(out);
  }
  return 0;
}

int do_translate(const RunConfig& cfg, std::ostream& out) {
  VocabularyPtr vocab;
  KB kb;
  if (!cfg.kb_path.empty()) {
    kb = parse_kb(slurp(cfg.kb_path));
    vocab = kb.vocab;
  } else {
    vocab = std::make_shared<Vocabulary>();
  }
  CN2RPQ parsed = parse_query(slurp(cfg.query_path), *vocab);
  auto [q, facts] = eliminate_nominal_tests(parsed, *vocab);
  TranslatedQuery translated = translate_cn2rpq(q, *vocab);
  KB companion;
  companion.fragment = Fragment::ELI;
  companion.tbox = translated.tbox;
  companion.vocab = vocab;
  for (const ConceptFact& f : facts)
    companion.abox.concept_assertions.push_back(
        {Concept::make_name(f.concept_name), f.ind});
  std::string kb_text = print_kb(companion);
  std::string query_text = print_query(translated.query, *vocab);
  if (cfg.output == OutputMode::Json) {
    json doc;
    doc["tbox"] = kb_text;
    doc["query"] = query_text;
    out << doc.dump(2) << "\n";
  } else {
    out << kb_text << "\n" << query_text << "\n";
  }
  return 0;
}

HornTheory random_horn(unsigned seed, int nvars, int nrules) {
  std::mt19937 rng(seed);
  std::vector<std::string> vars;
  for (int i = 0; i < nvars; ++i) vars.push_back(std::string(1, 'a' + i));
  auto pick = [&] { return vars[rng() % vars.size()]; };
  HornTheory h;
  h.vars = vars;
  for (int i = 0; i < nrules; ++i) {
    HornRule rule;
    rule.head = pick();
    std::set<std::string> body;
    for (unsigned j = rng() % 3; j > 0; --j) body.insert(pick());
    rule.body.assign(body.begin(), body.end());
    h.rules.push_back(std::move(rule));
  }
  h.goal = pick();
  return h;
}

// The designated pair is pinned by nominal tests so the emitted query is
// Boolean: it answers true exactly when the pair is in the expression's
// relation over the generated graph.
std::string pinned_boolean_query(const NREPtr& expr, IndId from, IndId to,
                                 const Vocabulary& vocab) {
  NREPtr pinned = NRE::concat(NRE::nominal_test(from),
                              NRE::concat(expr, NRE::nominal_test(to)));
  return "q() <- (" + print_nre(*pinned, vocab) + ")(u, v)\n";
}

int do_gen_horn(const RunConfig& cfg, std::ostream& out) {
  HornTheory theory;
  if (!cfg.input_path.empty()) {
    if (cfg.have_seed)
      throw ParseError("gen horn takes --input or --seed, not both");
    theory = parse_horn(slurp(cfg.input_path));
  } else if (cfg.have_seed) {
    theory = random_horn(cfg.seed, cfg.horn_vars, cfg.horn_rules);
  } else {
    throw ParseError("gen horn needs --input FILE or --seed N");
  }
  bool entailed = horn_entails(theory);
  HornInstance inst = gen_horn_instance(theory);
  spill(cfg.out_kb_path, print_kb(inst.kb));
  std::string query_text;
  query_text += "# theory:\n";
  std::istringstream lines(print_horn(theory));
  for (std::string line; std::getline(lines, line);)
    query_text += "#   " + line + "\n";
  query_text += std::string("# goal entailed: ") +
                (entailed ? "true" : "false") + "\n";
  query_text +=
      pinned_boolean_query(inst.query, inst.from, inst.to, *inst.kb.vocab);
  spill(cfg.out_query_path, query_text);
  if (cfg.output == OutputMode::Json) {
    json doc;
    doc["entailed"] = entailed;
    doc["kb"] = cfg.out_kb_path;
    doc["query"] = cfg.out_query_path;
    out << doc.dump(2) << "\n";
  } else {
    out << "wrote " << cfg.out_kb_path << " and " << cfg.out_query_path
        << "\n";
    out << "goal entailed: " << (entailed ? "true" : "false") << "\n";
  }
  return 0;
}

int do_gen_atm(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input_path.empty()) throw ParseError("gen atm needs --input FILE");
  Fragment fragment = fragment_from_tag(cfg.fragment);
  if (fragment != Fragment::DLLiteCore && fragment != Fragment::EL)
    throw ParseError("gen atm targets --fragment dl-lite-core or el");
  ATMSpec machine = parse_atm(slurp(cfg.input_path));
  std::vector<std::string> warnings;
  bool accepts = simulate_atm(machine, &warnings);
  ATMInstance inst = gen_atm_instance(machine, fragment);
  spill(cfg.out_kb_path, print_kb(inst.kb));
  NREPtr expr = nnfa_to_nre(inst.query);
  std::string query_text;
  query_text += std::string("# machine accepts: ") +
                (accepts ? "true" : "false") + "\n";
  for (const std::string& w : warnings) query_text += "# warning: " + w + "\n";
  query_text +=
      pinned_boolean_query(expr, inst.root, inst.root, *inst.kb.vocab);
  spill(cfg.out_query_path, query_text);
  if (cfg.output == OutputMode::Json) {
    json doc;
    doc["accepts"] = accepts;
    doc["warnings"] = warnings;
    doc["kb"] = cfg.out_kb_path;
    doc["query"] = cfg.out_query_path;
    out << doc.dump(2) << "\n";
  } else {
    out << "wrote " << cfg.out_kb_path << " and " << cfg.out_query_path
        << "\n";
    out << "machine accepts: " << (accepts ? "true" : "false") << "\n";
    for (const std::string& w : warnings) out << "warning: " << w << "\n";
  }
  return 0;
}

int do_eval_graph(const RunConfig& cfg, std::ostream& out) {
  Stopwatch watch;
  KB kb = parse_kb(slurp(cfg.kb_path));
  FiniteInterpretation model = from_plain_kb(kb);
  CN2RPQ q = parse_query(slurp(cfg.query_path), *kb.vocab);
  watch.mark("load");
  std::set<std::vector<ObjId>> raw = answers_on_interpretation(q, model);
  bool boolean_value = raw.count({}) > 0;
  std::vector<std::vector<std::string>> tuples;
  for (const auto& tup : raw) {
    std::vector<std::string> names;
    names.reserve(tup.size());
    for (ObjId o : tup) names.push_back(model.object_name(o));
    tuples.push_back(std::move(names));
  }
  std::sort(tuples.begin(), tuples.end());
  watch.mark("answer");
  emit_answers(cfg, q, tuples, boolean_value, watch, "graph", out);
  return 0;
}

int do_dump_loops(const RunConfig& cfg, std::ostream& out) {
  KB kb = parse_kb(slurp(cfg.kb_path));
  CN2RPQ parsed = parse_query(slurp(cfg.query_path), *kb.vocab);
  auto [q, facts] = eliminate_nominal_tests(parsed, *kb.vocab);
  NormalizedKB nkb = normalize(kb);
  std::vector<IndId> extra;
  for (const ConceptFact& f : facts) {
    nkb.concept_facts.push_back(f);
    extra.push_back(f.ind);
  }
  ensure_individuals(nkb, extra);
  Engine engine(nkb);
  engine.certain_answers(q);
  out << engine.loop_tables().dump();
  return 0;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.subcommand == "answer") return do_answer(cfg, out);
  if (cfg.subcommand == "check-sat") return do_check_sat(cfg, out);
  if (cfg.subcommand == "rewrite") return do_rewrite(cfg, out);
  if (cfg.subcommand == "translate") return do_translate(cfg, out);
  if (cfg.subcommand == "gen horn") return do_gen_horn(cfg, out);
  if (cfg.subcommand == "gen atm") return do_gen_atm(cfg, out);
  if (cfg.subcommand == "eval-graph") return do_eval_graph(cfg, out);
  if (cfg.subcommand == "dump-loops") return do_dump_loops(cfg, out);
  throw InternalError("no subcommand dispatched");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"query answering for nested two-way regular path queries",
               "nrpq"};
  app.require_subcommand(1);

  const std::map<std::string, EngineKind> engine_names{
      {"rewrite", EngineKind::Rewrite},
      {"reduction", EngineKind::Reduction},
      {"graph", EngineKind::Graph}};

  auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_flag_callback(
        "--json", [&cfg] { cfg.output = OutputMode::Json; },
        "emit a JSON document instead of plain text");
    cmd->add_flag(
        "--timings", cfg.timings,
        "include wall-clock phase timings (output is no longer byte-stable)");
  };

  CLI::App* answer = app.add_subcommand(
      "answer", "certain answers of a query over a knowledge base");
  answer->add_option("--kb", cfg.kb_path, "knowledge base file")->required();
  answer->add_option("--query", cfg.query_path, "query file")->required();
  answer
      ->add_option("--engine", cfg.engine,
                   "answering pipeline: rewrite (default), reduction, graph")
      ->transform(CLI::CheckedTransformer(engine_names, CLI::ignore_case));
  answer->add_option(
      "--depth", cfg.depth,
      "with --engine graph over a TBox: canonical-model materialization "
      "depth");
  answer->add_option("--out-graph", cfg.out_graph_path,
                     "write the evaluated structure in plain-graph format");
  add_output_flags(answer);
  answer->callback([&cfg] { cfg.subcommand = "answer"; });

  CLI::App* check_sat =
      app.add_subcommand("check-sat", "knowledge base satisfiability");
  check_sat->add_option("--kb", cfg.kb_path, "knowledge base file")
      ->required();
  add_output_flags(check_sat);
  check_sat->callback([&cfg] { cfg.subcommand = "check-sat"; });

  CLI::App* rewrite = app.add_subcommand(
      "rewrite", "ABox-independent rewriting of a query against a TBox");
  rewrite->add_option("--kb", cfg.kb_path, "knowledge base file (TBox used)")
      ->required();
  rewrite->add_option("--query", cfg.query_path, "query file")->required();
  add_output_flags(rewrite);
  rewrite->callback([&cfg] { cfg.subcommand = "rewrite"; });

  CLI::App* translate = app.add_subcommand(
      "translate",
      "flatten nested tests into companion axioms plus a plain query");
  translate->add_option("--kb", cfg.kb_path,
                        "optional knowledge base supplying the vocabulary");
  translate->add_option("--query", cfg.query_path, "query file")->required();
  add_output_flags(translate);
  translate->callback([&cfg] { cfg.subcommand = "translate"; });

  CLI::App* gen =
      app.add_subcommand("gen", "write generated instance files");
  gen->require_subcommand(1);

  CLI::App* gen_horn = gen->add_subcommand(
      "horn", "graph instance deciding a Horn theory's goal");
  gen_horn->add_option("--input", cfg.input_path, "Horn theory file");
  gen_horn
      ->add_option("--seed", cfg.seed, "generate a random theory instead")
      ->each([&cfg](const std::string&) { cfg.have_seed = true; });
  gen_horn->add_option("--vars", cfg.horn_vars, "random theory variables")
      ->check(CLI::Range(1, 26));
  gen_horn->add_option("--rules", cfg.horn_rules, "random theory rules")
      ->check(CLI::Range(0, 64));
  gen_horn->add_option("--out-kb", cfg.out_kb_path, "instance KB output path")
      ->required();
  gen_horn
      ->add_option("--out-query", cfg.out_query_path,
                   "instance query output path")
      ->required();
  add_output_flags(gen_horn);
  gen_horn->callback([&cfg] { cfg.subcommand = "gen horn"; });

  CLI::App* gen_atm = gen->add_subcommand(
      "atm", "knowledge base and query simulating an alternating machine");
  gen_atm->add_option("--input", cfg.input_path, "machine file")->required();
  gen_atm->add_option("--fragment", cfg.fragment,
                      "target fragment: dl-lite-core (default) or el");
  gen_atm->add_option("--out-kb", cfg.out_kb_path, "instance KB output path")
      ->required();
  gen_atm
      ->add_option("--out-query", cfg.out_query_path,
                   "instance query output path")
      ->required();
  add_output_flags(gen_atm);
  gen_atm->callback([&cfg] { cfg.subcommand = "gen atm"; });

  CLI::App* eval_graph = app.add_subcommand(
      "eval-graph", "evaluate a query over a plain graph, closed world");
  eval_graph
      ->add_option("--kb", cfg.kb_path, "assertions-only graph file")
      ->required();
  eval_graph->add_option("--query", cfg.query_path, "query file")->required();
  add_output_flags(eval_graph);
  eval_graph->callback([&cfg] { cfg.subcommand = "eval-graph"; });

  CLI::App* dump_loops = app.add_subcommand(
      "dump-loops",
      "answer a query, then list every memoized loop-table entry");
  dump_loops->add_option("--kb", cfg.kb_path, "knowledge base file")
      ->required();
  dump_loops->add_option("--query", cfg.query_path, "query file")->required();
  dump_loops->callback([&cfg] { cfg.subcommand = "dump-loops"; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    return dispatch(cfg, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace nrpq
