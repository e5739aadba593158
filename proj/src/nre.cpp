// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/nre.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <optional>
#include <tuple>

namespace nrpq {

NREPtr NRE::make_role(RoleExpr r) {
  auto node = std::make_shared<NRE>();
  node->kind = Kind::Role;
  node->role = r;
  return node;
}

NREPtr NRE::concept_test(ConceptId a) {
  auto node = std::make_shared<NRE>();
  node->kind = Kind::ConceptTest;
  node->concept_name = a;
  return node;
}

NREPtr NRE::nominal_test(IndId a) {
  auto node = std::make_shared<NRE>();
  node->kind = Kind::NominalTest;
  node->individual = a;
  return node;
}

NREPtr NRE::concat(NREPtr l, NREPtr r) {
  auto node = std::make_shared<NRE>();
  node->kind = Kind::Concat;
  node->lhs = std::move(l);
  node->rhs = std::move(r);
  return node;
}

NREPtr NRE::alternative(NREPtr l, NREPtr r) {
  auto node = std::make_shared<NRE>();
  node->kind = Kind::Union;
  node->lhs = std::move(l);
  node->rhs = std::move(r);
  return node;
}

NREPtr NRE::star(NREPtr e) {
  auto node = std::make_shared<NRE>();
  node->kind = Kind::Star;
  node->lhs = std::move(e);
  return node;
}

NREPtr NRE::test(NREPtr e) {
  auto node = std::make_shared<NRE>();
  node->kind = Kind::Test;
  node->lhs = std::move(e);
  return node;
}

namespace {

struct NreParser {
  const std::string& text;
  size_t pos;
  Vocabulary& vocab;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(
                                    text[pos])) != 0) {
      ++pos;
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < pos && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  bool try_consume(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!try_consume(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  std::string ident() {
    skip_space();
    size_t start = pos;
    if (pos >= text.size() ||
        std::isalpha(static_cast<unsigned char>(text[pos])) == 0) {
      fail("expected an identifier");
    }
    ++pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) != 0 ||
            text[pos] == '_')) {
      ++pos;
    }
    return text.substr(start, pos - start);
  }

  NREPtr parse_alt() {
    NREPtr left = parse_seq();
    while (try_consume('|')) {
      left = NRE::alternative(std::move(left), parse_seq());
    }
    return left;
  }

  NREPtr parse_seq() {
    NREPtr left = parse_star();
    while (try_consume('.')) {
      left = NRE::concat(std::move(left), parse_star());
    }
    return left;
  }

  NREPtr parse_star() {
    NREPtr base = parse_base();
    while (try_consume('*')) base = NRE::star(std::move(base));
    return base;
  }

  NREPtr parse_base() {
    skip_space();
    if (try_consume('(')) {
      NREPtr inner = parse_alt();
      expect(')', "to close the group");
      return inner;
    }
    if (try_consume('<')) {
      NREPtr inner = parse_alt();
      expect('>', "to close the test");
      return NRE::test(std::move(inner));
    }
    if (try_consume('{')) {
      std::string name = ident();
      expect('}', "to close the nominal test");
      expect('?', "after the nominal test");
      return NRE::nominal_test(vocab.ind_id(name));
    }
    std::string name = ident();
    // '?' and '-' attach directly to the identifier, without spaces.
    if (pos < text.size() && text[pos] == '?') {
      ++pos;
      return NRE::concept_test(vocab.concept_id(name));
    }
    bool inverted = false;
    if (pos < text.size() && text[pos] == '-') {
      ++pos;
      inverted = true;
    }
    return NRE::make_role(RoleExpr{vocab.role_id(name), inverted});
  }
};

enum Precedence { kUnion = 0, kConcat = 1, kStar = 2 };

void print_rec(const NRE& e, const Vocabulary& vocab, int parent,
               std::string& out) {
  switch (e.kind) {
    case NRE::Kind::Role:
      out += vocab.role_expr_name(e.role);
      return;
    case NRE::Kind::ConceptTest:
      out += vocab.concept_name(e.concept_name) + "?";
      return;
    case NRE::Kind::NominalTest:
      out += "{" + vocab.ind_name(e.individual) + "}?";
      return;
    case NRE::Kind::Test:
      out += "<";
      print_rec(*e.lhs, vocab, kUnion, out);
      out += ">";
      return;
    case NRE::Kind::Star:
      print_rec(*e.lhs, vocab, kStar + 1, out);
      out += "*";
      return;
    case NRE::Kind::Concat:
    case NRE::Kind::Union: {
      int level = e.kind == NRE::Kind::Concat ? kConcat : kUnion;
      bool paren = level < parent;
      if (paren) out += "(";
      print_rec(*e.lhs, vocab, level, out);
      out += e.kind == NRE::Kind::Concat ? " . " : " | ";
      print_rec(*e.rhs, vocab, level + 1, out);
      if (paren) out += ")";
      return;
    }
  }
  throw InternalError("unhandled expression shape");
}

// Thompson construction state, local to one automaton under construction.
struct LocalAutomaton {
  uint32_t num_states = 0;
  uint32_t initial = 0;
  uint32_t accept = 0;
  std::vector<std::tuple<uint32_t, std::optional<NNFALabel>, uint32_t>>
      transitions;
};

struct Fragment {
  uint32_t start, accept;
};

struct Compiler {
  std::vector<LocalAutomaton> automata;

  uint32_t new_state(uint32_t idx) { return automata[idx].num_states++; }

  void link(uint32_t idx, uint32_t from, std::optional<NNFALabel> label,
            uint32_t to) {
    automata[idx].transitions.emplace_back(from, std::move(label), to);
  }

  uint32_t compile_automaton(const NRE& e) {
    uint32_t idx = static_cast<uint32_t>(automata.size());
    automata.emplace_back();
    Fragment f = build(idx, e);
    automata[idx].initial = f.start;
    automata[idx].accept = f.accept;
    return idx;
  }

  Fragment build(uint32_t idx, const NRE& e) {
    switch (e.kind) {
      case NRE::Kind::Role:
      case NRE::Kind::ConceptTest:
      case NRE::Kind::NominalTest: {
        uint32_t s = new_state(idx), f = new_state(idx);
        NNFALabel label;
        if (e.kind == NRE::Kind::Role) {
          label = NNFALabel::make_role(e.role);
        } else if (e.kind == NRE::Kind::ConceptTest) {
          label = NNFALabel::concept_test(e.concept_name);
        } else {
          label = NNFALabel::nominal_test(e.individual);
        }
        link(idx, s, std::move(label), f);
        return {s, f};
      }
      case NRE::Kind::Concat: {
        Fragment a = build(idx, *e.lhs);
        Fragment b = build(idx, *e.rhs);
        link(idx, a.accept, std::nullopt, b.start);
        return {a.start, b.accept};
      }
      case NRE::Kind::Union: {
        uint32_t s = new_state(idx), f = new_state(idx);
        Fragment a = build(idx, *e.lhs);
        Fragment b = build(idx, *e.rhs);
        link(idx, s, std::nullopt, a.start);
        link(idx, s, std::nullopt, b.start);
        link(idx, a.accept, std::nullopt, f);
        link(idx, b.accept, std::nullopt, f);
        return {s, f};
      }
      case NRE::Kind::Star: {
        uint32_t s = new_state(idx), f = new_state(idx);
        Fragment a = build(idx, *e.lhs);
        link(idx, s, std::nullopt, f);
        link(idx, s, std::nullopt, a.start);
        link(idx, a.accept, std::nullopt, a.start);
        link(idx, a.accept, std::nullopt, f);
        return {s, f};
      }
      case NRE::Kind::Test: {
        uint32_t child = compile_automaton(*e.lhs);
        uint32_t s = new_state(idx), f = new_state(idx);
        link(idx, s, NNFALabel::nested_test({child}), f);
        return {s, f};
      }
    }
    throw InternalError("unhandled expression shape");
  }
};

// Removes epsilon transitions and unreachable states; renumbers states in
// BFS order from the initial state for deterministic output.
struct CleanAutomaton {
  uint32_t num_states = 0;
  uint32_t initial = 0;
  std::vector<uint32_t> finals;
  std::vector<std::tuple<uint32_t, NNFALabel, uint32_t>> transitions;
};

CleanAutomaton eliminate_epsilon(const LocalAutomaton& a) {
  std::vector<std::vector<uint32_t>> eps(a.num_states);
  std::vector<std::vector<std::pair<NNFALabel, uint32_t>>> labeled(
      a.num_states);
  for (const auto& [from, label, to] : a.transitions) {
    if (label.has_value()) {
      labeled[from].emplace_back(*label, to);
    } else {
      eps[from].push_back(to);
    }
  }
  auto closure = [&](uint32_t s) {
    std::vector<bool> seen(a.num_states, false);
    std::deque<uint32_t> queue{s};
    seen[s] = true;
    std::vector<uint32_t> out;
    while (!queue.empty()) {
      uint32_t u = queue.front();
      queue.pop_front();
      out.push_back(u);
      for (uint32_t v : eps[u]) {
        if (!seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    return out;
  };

  std::vector<std::vector<std::pair<NNFALabel, uint32_t>>> moves(
      a.num_states);
  std::vector<bool> is_final(a.num_states, false);
  for (uint32_t s = 0; s < a.num_states; ++s) {
    for (uint32_t v : closure(s)) {
      if (v == a.accept) is_final[s] = true;
      for (const auto& m : labeled[v]) moves[s].push_back(m);
    }
  }

  // Keep states reachable from the initial one, renumbered in BFS order.
  std::vector<uint32_t> remap(a.num_states, UINT32_MAX);
  std::deque<uint32_t> queue{a.initial};
  remap[a.initial] = 0;
  uint32_t next = 1;
  std::vector<uint32_t> order{a.initial};
  while (!queue.empty()) {
    uint32_t u = queue.front();
    queue.pop_front();
    for (const auto& [label, to] : moves[u]) {
      if (remap[to] == UINT32_MAX) {
        remap[to] = next++;
        order.push_back(to);
        queue.push_back(to);
      }
    }
  }

  CleanAutomaton out;
  out.num_states = next;
  out.initial = 0;
  for (uint32_t u : order) {
    if (is_final[u]) out.finals.push_back(remap[u]);
    for (const auto& [label, to] : moves[u]) {
      out.transitions.emplace_back(remap[u], label, remap[to]);
    }
  }
  std::sort(out.finals.begin(), out.finals.end());
  return out;
}

}  // namespace

NREPtr parse_nre_prefix(const std::string& text, size_t& pos,
                        Vocabulary& vocab) {
  NreParser parser{text, pos, vocab};
  NREPtr e = parser.parse_alt();
  pos = parser.pos;
  return e;
}

NREPtr parse_nre(const std::string& text, Vocabulary& vocab) {
  size_t pos = 0;
  NREPtr e = parse_nre_prefix(text, pos, vocab);
  NreParser tail{text, pos, vocab};
  tail.skip_space();
  if (tail.pos != text.size()) {
    tail.fail("unexpected trailing input after the expression");
  }
  return e;
}

std::string print_nre(const NRE& e, const Vocabulary& vocab) {
  std::string out;
  print_rec(e, vocab, kUnion, out);
  return out;
}

NNFAPart compile_nre(const NRE& e, const Vocabulary& vocab) {
  Compiler compiler;
  compiler.compile_automaton(e);

  auto nnfa = std::make_shared<NNFA>();
  std::vector<StateId> offsets;
  for (uint32_t i = 0; i < compiler.automata.size(); ++i) {
    CleanAutomaton clean = eliminate_epsilon(compiler.automata[i]);
    nnfa->automata.emplace_back();
    offsets.push_back(nnfa->num_states());
    for (uint32_t s = 0; s < clean.num_states; ++s) add_state(*nnfa, i, "");
    Automaton& automaton = nnfa->automata[i];
    automaton.initial = offsets[i] + clean.initial;
    for (uint32_t f : clean.finals) automaton.finals.push_back(offsets[i] + f);
    for (const auto& [from, label, to] : clean.transitions) {
      automaton.transitions.push_back(
          NNFATransition{offsets[i] + from, label, offsets[i] + to});
    }
  }
  validate_nnfa(*nnfa);

  NNFAPart part;
  part.start = nnfa->automata[0].initial;
  part.finals = nnfa->automata[0].finals;
  part.nnfa = std::move(nnfa);
  part.display = std::make_shared<const std::string>(print_nre(e, vocab));
  return part;
}

namespace {

NREPtr automaton_to_nre(const NNFA& n, uint32_t index, StateId start,
                        const std::vector<StateId>& finals);

NREPtr balanced_union(std::vector<NREPtr> items) {
  if (items.empty()) return nullptr;
  while (items.size() > 1) {
    std::vector<NREPtr> next;
    next.reserve(items.size() / 2 + 1);
    for (size_t i = 0; i + 1 < items.size(); i += 2)
      next.push_back(NRE::alternative(items[i], items[i + 1]));
    if (items.size() % 2) next.push_back(items.back());
    items = std::move(next);
  }
  return items[0];
}

// Edge expressions use null for "no edge"; the helpers keep that convention
// so the elimination formula can drop absent factors instead of inventing
// an empty-word expression.
NREPtr edge_union(NREPtr a, NREPtr b) {
  if (!a) return b;
  if (!b) return a;
  return NRE::alternative(std::move(a), std::move(b));
}

NREPtr then_star(NREPtr x, NREPtr loop) {
  if (!x) return nullptr;
  if (!loop) return x;
  return NRE::concat(std::move(x), NRE::star(std::move(loop)));
}

NREPtr star_then(NREPtr loop, NREPtr x) {
  if (!x) return nullptr;
  if (!loop) return x;
  return NRE::concat(NRE::star(std::move(loop)), std::move(x));
}

NREPtr label_to_nre(const NNFA& n, const NNFALabel& label) {
  switch (label.kind) {
    case NNFALabel::Kind::Role:
      return NRE::make_role(label.role);
    case NNFALabel::Kind::ConceptTest:
      return NRE::concept_test(label.concept_name);
    case NNFALabel::Kind::NominalTest:
      return NRE::nominal_test(label.individual);
    case NNFALabel::Kind::NestedTest: {
      NREPtr out;
      for (uint32_t j : label.tests) {
        const Automaton& sub = n.automata[j];
        NREPtr e =
            NRE::test(automaton_to_nre(n, j, sub.initial, sub.finals));
        out = out ? NRE::concat(std::move(out), std::move(e)) : std::move(e);
      }
      internal_check(out != nullptr, "nested test references no automata");
      return out;
    }
  }
  throw InternalError("unhandled NNFA label kind");
}

NREPtr automaton_to_nre(const NNFA& n, uint32_t index, StateId start,
                        const std::vector<StateId>& finals) {
  const Automaton& a = n.automata[index];
  if (std::find(finals.begin(), finals.end(), start) != finals.end())
    throw InternalError(
        "nnfa_to_nre: the start state is final and expressions cannot "
        "denote the empty run");
  std::map<StateId, size_t> local;
  for (StateId s : a.states) local.emplace(s, local.size());
  size_t k = a.states.size();
  std::vector<std::vector<std::vector<NREPtr>>> parallel(
      k, std::vector<std::vector<NREPtr>>(k));
  for (const NNFATransition& t : a.transitions)
    parallel[local.at(t.from)][local.at(t.to)].push_back(
        label_to_nre(n, t.label));
  std::vector<std::vector<NREPtr>> edge(k, std::vector<NREPtr>(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      edge[i][j] = balanced_union(std::move(parallel[i][j]));

  size_t s = local.at(start);
  std::vector<NREPtr> parts;
  for (StateId fglobal : finals) {
    size_t f = local.at(fglobal);
    // Paths may pass through other final states, so each final gets its own
    // elimination down to the two-state pattern (A | B D* C)* B D*.
    auto e = edge;
    for (size_t x = 0; x < k; ++x) {
      if (x == s || x == f) continue;
      NREPtr loop = e[x][x];
      for (size_t i = 0; i < k; ++i) {
        if (i == x || !e[i][x]) continue;
        NREPtr prefix = then_star(e[i][x], loop);
        for (size_t j = 0; j < k; ++j) {
          if (j == x || !e[x][j]) continue;
          e[i][j] = edge_union(e[i][j], NRE::concat(prefix, e[x][j]));
        }
      }
      for (size_t i = 0; i < k; ++i) {
        e[i][x] = nullptr;
        e[x][i] = nullptr;
      }
    }
    NREPtr direct = then_star(e[s][f], e[f][f]);
    if (!direct) continue;
    NREPtr back = e[f][s] ? NRE::concat(direct, e[f][s]) : nullptr;
    parts.push_back(star_then(edge_union(e[s][s], std::move(back)), direct));
  }
  NREPtr out = balanced_union(std::move(parts));
  if (!out)
    throw InternalError(
        "nnfa_to_nre: no final state is reachable from the start state");
  return out;
}

}  // namespace

NREPtr nnfa_to_nre(const NNFAPart& part) {
  internal_check(part.nnfa != nullptr, "nnfa_to_nre requires an automaton");
  return automaton_to_nre(*part.nnfa, part.automaton(), part.start,
                          part.finals);
}

}  // namespace nrpq
