// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/atm.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace nrpq {

namespace {

constexpr char kSymbols[] = {'0', '1', 'b'};

bool valid_symbol(char c) { return c == '0' || c == '1' || c == 'b'; }

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on_comma(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

char parse_symbol(const std::string& tok, int lineno) {
  if (tok.size() == 1 && valid_symbol(tok[0])) return tok[0];
  throw ParseError("invalid tape symbol '" + tok + "' (use 0, 1, or b)",
                   lineno);
}

int parse_move(const std::string& tok, int lineno) {
  if (tok == "-1") return -1;
  if (tok == "0") return 0;
  if (tok == "+1" || tok == "1") return 1;
  throw ParseError("invalid head move '" + tok + "' (use -1, 0, or +1)",
                   lineno);
}

struct Row {
  std::string from;
  char read = 'b';
  ATMMove move;
};

Row parse_row(const std::string& line, int lineno) {
  size_t arrow = line.find("->");
  if (arrow == std::string::npos)
    throw ParseError("expected a transition row 's,sym -> s',sym',move'",
                     lineno);
  std::vector<std::string> lhs = split_on_comma(trim(line.substr(0, arrow)));
  std::vector<std::string> rhs = split_on_comma(trim(line.substr(arrow + 2)));
  if (lhs.size() != 2 || lhs[0].empty())
    throw ParseError("expected 'state,symbol' before '->'", lineno);
  if (rhs.size() != 3 || rhs[0].empty())
    throw ParseError("expected 'state,symbol,move' after '->'", lineno);
  Row row;
  row.from = lhs[0];
  row.read = parse_symbol(lhs[1], lineno);
  row.move.state = rhs[0];
  row.move.write = parse_symbol(rhs[1], lineno);
  row.move.dir = parse_move(rhs[2], lineno);
  return row;
}

}  // namespace

bool ATMSpec::is_universal(const std::string& s) const {
  return std::find(universal.begin(), universal.end(), s) != universal.end();
}

ATMSpec parse_atm(const std::string& text) {
  ATMSpec m;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  int section = 0;  // 0 outside the tables, 1 inside delta1, 2 inside delta2
  bool saw_states = false, saw_universal = false, saw_init = false,
       saw_accept = false, saw_reject = false, saw_word = false;
  while (std::getline(in, raw)) {
    ++lineno;
    if (size_t hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    std::string head = line.substr(0, line.find_first_of(" \t"));
    std::string rest = trim(line.substr(head.size()));
    auto single_token = [&](bool& seen) {
      if (seen) throw ParseError("duplicate '" + head + "' line", lineno);
      seen = true;
      std::vector<std::string> toks = split_ws(rest);
      if (toks.size() != 1)
        throw ParseError("expected exactly one token after '" + head + "'",
                         lineno);
      return toks[0];
    };
    if (head == "states") {
      if (saw_states) throw ParseError("duplicate 'states' line", lineno);
      saw_states = true;
      m.states = split_ws(rest);
      if (m.states.empty()) throw ParseError("empty state list", lineno);
      section = 0;
    } else if (head == "universal") {
      if (saw_universal)
        throw ParseError("duplicate 'universal' line", lineno);
      saw_universal = true;
      m.universal = split_ws(rest);
      section = 0;
    } else if (head == "init") {
      m.init = single_token(saw_init);
      section = 0;
    } else if (head == "accept") {
      m.accept = single_token(saw_accept);
      section = 0;
    } else if (head == "reject") {
      m.reject = single_token(saw_reject);
      section = 0;
    } else if (head == "word") {
      m.word = single_token(saw_word);
      section = 0;
    } else if (head == "delta1" || head == "delta2") {
      if (!rest.empty())
        throw ParseError("unexpected tokens after '" + head + "'", lineno);
      section = head == "delta1" ? 1 : 2;
    } else if (section != 0) {
      Row row = parse_row(line, lineno);
      auto& table = section == 1 ? m.delta1 : m.delta2;
      auto [it, fresh] =
          table.emplace(std::make_pair(row.from, row.read), row.move);
      if (!fresh)
        throw ParseError("duplicate delta" + std::to_string(section) +
                             " row for '" + row.from + "," +
                             std::string(1, row.read) + "'",
                         lineno);
    } else {
      throw ParseError("unrecognized line '" + line + "'", lineno);
    }
  }
  if (!saw_states) throw ParseError("missing 'states' line");
  if (!saw_init) throw ParseError("missing 'init' line");
  if (!saw_accept) throw ParseError("missing 'accept' line");
  if (!saw_reject) throw ParseError("missing 'reject' line");
  if (!saw_word) throw ParseError("missing 'word' line");
  validate_atm(m);
  return m;
}

std::string print_atm(const ATMSpec& m) {
  std::ostringstream out;
  out << "states";
  for (const std::string& s : m.states) out << " " << s;
  out << "\n";
  if (!m.universal.empty()) {
    out << "universal";
    for (const std::string& s : m.universal) out << " " << s;
    out << "\n";
  }
  out << "init " << m.init << "\n";
  out << "accept " << m.accept << "\n";
  out << "reject " << m.reject << "\n";
  out << "word " << m.word << "\n";
  for (int p : {1, 2}) {
    const auto& table = p == 1 ? m.delta1 : m.delta2;
    out << "delta" << p << "\n";
    for (const std::string& s : m.states)
      for (char sym : kSymbols) {
        auto it = table.find({s, sym});
        if (it == table.end()) continue;
        const ATMMove& mv = it->second;
        out << s << "," << sym << " -> " << mv.state << "," << mv.write << ","
            << (mv.dir > 0 ? "+1" : mv.dir < 0 ? "-1" : "0") << "\n";
      }
  }
  return out.str();
}

void validate_atm(const ATMSpec& m) {
  std::set<std::string> declared;
  for (const std::string& s : m.states) {
    if (s.empty()) throw ParseError("empty state name");
    if (!declared.insert(s).second)
      throw ParseError("duplicate state '" + s + "'");
  }
  if (declared.empty()) throw ParseError("the machine declares no states");
  std::set<std::string> universal;
  for (const std::string& s : m.universal) {
    if (!declared.count(s))
      throw ParseError("universal state '" + s + "' is not declared");
    if (!universal.insert(s).second)
      throw ParseError("duplicate universal state '" + s + "'");
  }
  auto require_declared = [&](const std::string& s, const char* what) {
    if (s.empty())
      throw ParseError(std::string("missing ") + what + " state");
    if (!declared.count(s))
      throw ParseError(std::string(what) + " state '" + s +
                       "' is not declared");
  };
  require_declared(m.init, "initial");
  require_declared(m.accept, "accepting");
  require_declared(m.reject, "rejecting");
  if (m.accept == m.reject)
    throw ParseError("the accepting and rejecting states must differ");
  if (m.init == m.accept || m.init == m.reject)
    throw ParseError("assumption (i) violated: the initial state '" + m.init +
                     "' must not be a halting state");
  for (const std::string* s : {&m.init, &m.accept, &m.reject})
    if (universal.count(*s))
      throw ParseError("state '" + *s +
                       "' must be existential (the initial and halting "
                       "states always are)");
  if (m.word.empty())
    throw ParseError("the word must be a non-empty string over {0,1}");
  for (char c : m.word)
    if (c != '0' && c != '1')
      throw ParseError("the word must be a non-empty string over {0,1}");
  for (int p : {1, 2}) {
    const auto& table = p == 1 ? m.delta1 : m.delta2;
    std::string name = "delta" + std::to_string(p);
    for (const auto& [key, mv] : table) {
      const auto& [s, sym] = key;
      if (!declared.count(s))
        throw ParseError(name + " row for undeclared state '" + s + "'");
      if (s == m.accept || s == m.reject)
        throw ParseError("halting states take no transitions: remove the " +
                         name + " row for '" + s + "'");
      if (!valid_symbol(sym) || !valid_symbol(mv.write))
        throw ParseError(name + " row for '" + s +
                         "' uses a symbol outside {0,1,b}");
      if (mv.dir < -1 || mv.dir > 1)
        throw ParseError(name + " row for '" + s +
                         "' uses a move outside {-1,0,+1}");
      if (!declared.count(mv.state))
        throw ParseError(name + " row for '" + s +
                         "' targets undeclared state '" + mv.state + "'");
    }
    for (const std::string& s : m.states) {
      if (s == m.accept || s == m.reject) continue;
      for (char sym : kSymbols)
        if (!table.count({s, sym}))
          throw ParseError("assumption (iii) violated: " + name +
                           " has no move for state '" + s + "' on symbol '" +
                           std::string(1, sym) + "'");
    }
  }
}

namespace {

struct Simulator {
  static constexpr size_t kNoDep = std::numeric_limits<size_t>::max();

  const ATMSpec& m;
  long cells = 0;
  std::set<std::string> warnings = {};
  std::map<std::string, bool> memo = {};
  std::map<std::string, size_t> on_path = {};

  std::string key(const std::string& state, long head,
                  const std::string& tape) const {
    return state + '\x1f' + std::to_string(head) + '\x1f' + tape;
  }

  // Solves one configuration. `dep` receives the shallowest on-path depth
  // the verdict relied on, kNoDep when it is unconditional. A cut cycle is
  // only false relative to the path that closed it, so conditional verdicts
  // must not enter the memo table.
  bool solve(const std::string& state, long head, const std::string& tape,
             size_t depth, size_t& dep) {
    dep = kNoDep;
    if (state == m.accept || state == m.reject) {
      if (tape.find_first_not_of('b') != std::string::npos)
        warnings.insert("assumption (ii) violated: halting state '" + state +
                        "' is reached with tape '" + tape + "'");
      return state == m.accept;
    }
    std::string k = key(state, head, tape);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    if (auto it = on_path.find(k); it != on_path.end()) {
      dep = it->second;
      return false;
    }
    on_path.emplace(k, depth);
    char sym = tape[static_cast<size_t>(head - 1)];
    auto step = [&](const ATMMove& mv, size_t& child_dep) {
      std::string next = tape;
      next[static_cast<size_t>(head - 1)] = mv.write;
      long h = head + mv.dir;
      if (h < 1 || h > cells)
        throw ParseError("tape bound violated: state '" + state +
                         "' on symbol '" + std::string(1, sym) +
                         "' moves the head off cells 1.." +
                         std::to_string(cells));
      return solve(mv.state, h, next, depth + 1, child_dep);
    };
    size_t dep1 = kNoDep, dep2 = kNoDep;
    bool v1 = step(m.delta1.at({state, sym}), dep1);
    bool v2 = step(m.delta2.at({state, sym}), dep2);
    bool value = m.is_universal(state) ? (v1 && v2) : (v1 || v2);
    on_path.erase(k);
    size_t need = kNoDep;
    if (!value) {
      if (m.is_universal(state)) {
        // One definitely failing move suffices; keep the strongest one.
        need = 0;
        if (!v1) need = std::max(need, dep1);
        if (!v2) need = std::max(need, dep2);
      } else {
        need = std::min(dep1, dep2);
      }
    }
    if (need >= depth)
      memo.emplace(k, value);
    else
      dep = need;
    return value;
  }
};

}  // namespace

bool simulate_atm(const ATMSpec& m, std::vector<std::string>* warnings) {
  validate_atm(m);
  Simulator sim{m, static_cast<long>(m.tape_cells())};
  size_t dep = Simulator::kNoDep;
  bool accepted = sim.solve(m.init, 1, m.word, 0, dep);
  if (warnings)
    warnings->insert(warnings->end(), sim.warnings.begin(),
                     sim.warnings.end());
  return accepted;
}

ATMInstance gen_atm_instance(const ATMSpec& m, Fragment fragment,
                             VocabularyPtr vocab) {
  validate_atm(m);
  internal_check(fragment == Fragment::DLLiteCore || fragment == Fragment::EL,
                 "gen_atm_instance emits dl-lite-core or el only");
  if (!vocab) vocab = std::make_shared<Vocabulary>();
  Vocabulary& v = *vocab;
  const bool el = fragment == Fragment::EL;
  const long cells = static_cast<long>(m.tape_cells());

  // The transition relation with deterministic ids. Moves that agree across
  // the two tables share one entry, so move_of remembers which entry each
  // (state, symbol, table) move realizes.
  struct Tup {
    std::string from;
    char read;
    std::string to;
    char write;
    int dir;
    auto operator<=>(const Tup&) const = default;
  };
  std::vector<Tup> tuples;
  std::map<Tup, uint32_t> ids;
  std::map<std::tuple<std::string, char, int>, uint32_t> move_of;
  for (const std::string& s : m.states) {
    if (s == m.accept || s == m.reject) continue;
    for (char sym : kSymbols)
      for (int p : {1, 2}) {
        const ATMMove& mv = (p == 1 ? m.delta1 : m.delta2).at({s, sym});
        Tup t{s, sym, mv.state, mv.write, mv.dir};
        auto [it, fresh] = ids.try_emplace(t, uint32_t(tuples.size()));
        if (fresh) tuples.push_back(t);
        move_of[{s, sym, p}] = it->second;
      }
  }

  auto role_of = [&v](int p, uint32_t tid, long i) {
    return v.role_id("r" + std::to_string(p) + "_" + std::to_string(tid) +
                     "_" + std::to_string(i));
  };
  // The el variant marks each child with a concept specific to its role, so
  // inverse roles never appear in the axioms.
  auto marker_of = [&v](int p, uint32_t tid, long i) {
    return v.concept_id("A" + std::to_string(p) + "_" + std::to_string(tid) +
                        "_" + std::to_string(i));
  };
  ConceptId a_init = v.concept_id("Ainit");
  ConceptId a_final = v.concept_id("Afinal");
  ConceptId a_exists = v.concept_id("Aexists");
  ConceptId a_forall = v.concept_id("Aforall");

  KB kb;
  kb.fragment = fragment;
  kb.vocab = vocab;

  auto add_child = [&](ConceptPtr lhs, int p, uint32_t tid, long i) {
    RoleExpr r{role_of(p, tid, i), false};
    ConceptPtr filler = el ? Concept::make_name(marker_of(p, tid, i))
                           : Concept::top();
    kb.tbox.concept_inclusions.push_back(
        {std::move(lhs), Concept::exists(r, std::move(filler))});
  };
  // The concept holding at elements reached over one generated role.
  auto reached_over = [&](int p, uint32_t tid, long i) -> ConceptPtr {
    if (el) return Concept::make_name(marker_of(p, tid, i));
    return Concept::exists(RoleExpr{role_of(p, tid, i), true}, Concept::top());
  };

  // Root axioms: one child per table and per guessed first symbol. Wrong
  // guesses survive here and are pruned by the per-cell tests.
  for (char sym : kSymbols)
    for (int p : {1, 2}) {
      uint32_t tid = move_of.at({m.init, sym, p});
      add_child(Concept::make_name(a_init), p, tid, 1 + tuples[tid].dir);
    }
  // Chain axioms: an element reached over an entry continues with every
  // move its state could take, from every head position.
  for (uint32_t tid = 0; tid < tuples.size(); ++tid) {
    const Tup& t = tuples[tid];
    if (t.to == m.accept || t.to == m.reject) continue;
    for (long i = 1; i <= cells; ++i)
      for (int p : {1, 2}) {
        ConceptPtr lhs = reached_over(p, tid, i);
        for (char sym : kSymbols)
          for (int q : {1, 2}) {
            uint32_t nid = move_of.at({t.to, sym, q});
            add_child(lhs, q, nid, i + tuples[nid].dir);
          }
      }
  }
  // Node labels, by the state the entry enters. Entries into the rejecting
  // state leave their child unlabeled, so no control move applies there and
  // the branch cannot be part of an accepted walk.
  for (uint32_t tid = 0; tid < tuples.size(); ++tid) {
    const Tup& t = tuples[tid];
    ConceptId label;
    if (t.to == m.accept)
      label = a_final;
    else if (t.to == m.reject)
      continue;
    else
      label = m.is_universal(t.to) ? a_forall : a_exists;
    for (long i = 1; i <= cells; ++i)
      for (int p : {1, 2})
        kb.tbox.concept_inclusions.push_back(
            {reached_over(p, tid, i), Concept::make_name(label)});
  }

  IndId root = v.ind_id("a");
  kb.abox.concept_assertions.push_back({Concept::make_name(a_init), root});
  kb.abox.concept_assertions.push_back({Concept::make_name(a_exists), root});

  // Control automaton. Downward it picks one child at existential nodes and
  // the first-table child at universal nodes; at a final node it runs every
  // per-cell test; upward it turns into the second-table child of each
  // universal node once and climbs on otherwise.
  NNFA nn;
  nn.automata.resize(size_t(cells) + 1);
  StateId sd = add_state(nn, 0, "down");
  StateId cl = add_state(nn, 0, "left");
  StateId cr = add_state(nn, 0, "right");
  StateId su = add_state(nn, 0, "up");
  StateId sx = add_state(nn, 0, "turn");
  StateId st = add_state(nn, 0, "check");
  StateId sf = add_state(nn, 0, "done");
  Automaton& a0 = nn.automata[0];
  a0.initial = sd;
  a0.finals = {sf};

  auto role_label = [&](int p, uint32_t tid, long i, bool inv) {
    return NNFALabel::make_role(RoleExpr{role_of(p, tid, i), inv});
  };
  a0.transitions.push_back({sd, NNFALabel::concept_test(a_exists), cl});
  a0.transitions.push_back({sd, NNFALabel::concept_test(a_exists), cr});
  a0.transitions.push_back({sd, NNFALabel::concept_test(a_forall), cl});
  a0.transitions.push_back({sd, NNFALabel::concept_test(a_final), st});
  std::vector<uint32_t> all_tests(static_cast<size_t>(cells));
  std::iota(all_tests.begin(), all_tests.end(), 1u);
  a0.transitions.push_back({st, NNFALabel::nested_test(all_tests), su});
  for (long i = 1; i <= cells; ++i)
    for (uint32_t tid = 0; tid < tuples.size(); ++tid) {
      a0.transitions.push_back({cl, role_label(1, tid, i, false), sd});
      a0.transitions.push_back({cr, role_label(2, tid, i, false), sd});
      a0.transitions.push_back({su, role_label(1, tid, i, true), sx});
      a0.transitions.push_back({su, role_label(2, tid, i, true), su});
    }
  a0.transitions.push_back({sx, NNFALabel::concept_test(a_forall), cr});
  a0.transitions.push_back({sx, NNFALabel::concept_test(a_exists), su});
  a0.transitions.push_back({sx, NNFALabel::concept_test(a_init), sf});
  // A walk that climbs out of a second-table edge reaches the root in the
  // plain up state, so the root test must be available there as well.
  a0.transitions.push_back({su, NNFALabel::concept_test(a_init), sf});

  // One test automaton per cell. It replays the chosen walk backward from
  // the final node, tracking the cell's symbol: steps aimed elsewhere keep
  // it, undoing a step that wrote the cell restores the symbol the step
  // scanned, and at the root the cell must hold its input symbol.
  for (long l = 1; l <= cells; ++l) {
    uint32_t ai = uint32_t(l);
    std::string tag = "c" + std::to_string(l) + "_";
    StateId s0 = add_state(nn, ai, tag + "0");
    StateId s1 = add_state(nn, ai, tag + "1");
    StateId sb = add_state(nn, ai, tag + "b");
    StateId ok = add_state(nn, ai, tag + "ok");
    auto sym_state = [&](char c) { return c == '0' ? s0 : c == '1' ? s1 : sb; };
    Automaton& al = nn.automata[ai];
    al.initial = sb;
    al.finals = {ok};
    for (char sym : kSymbols) {
      StateId s = sym_state(sym);
      for (long i = 1; i <= cells; ++i)
        for (uint32_t tid = 0; tid < tuples.size(); ++tid) {
          if (l == i - tuples[tid].dir) continue;
          for (int p : {1, 2})
            al.transitions.push_back({s, role_label(p, tid, i, true), s});
        }
    }
    for (const std::string& s : m.states) {
      if (s == m.accept || s == m.reject) continue;
      for (char sym : kSymbols)
        for (int p : {1, 2}) {
          uint32_t tid = move_of.at({s, sym, p});
          const Tup& t = tuples[tid];
          long i = l + t.dir;
          if (i < 1 || i > cells) continue;
          al.transitions.push_back(
              {sym_state(t.write), role_label(p, tid, i, true),
               sym_state(t.read)});
        }
    }
    al.transitions.push_back({sym_state(m.word[size_t(l) - 1]),
                              NNFALabel::concept_test(a_init), ok});
  }

  validate_nnfa(nn);
  NNFA reduced = reduce_nnfa(nn);
  ATMInstance inst;
  inst.kb = std::move(kb);
  inst.root = root;
  inst.query =
      NNFAPart{std::make_shared<NNFA>(std::move(reduced)), sd, {sf}, nullptr};
  return inst;
}

}  // namespace nrpq
