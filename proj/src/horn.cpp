// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/horn.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace nrpq {
namespace {

bool valid_var_name(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) {
    return false;
  }
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
      return false;
    }
  }
  return true;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Sorted variable set of the theory: declared, used, and goal.
std::vector<std::string> variable_set(const HornTheory& h) {
  std::set<std::string> vars(h.vars.begin(), h.vars.end());
  vars.insert(h.goal);
  for (const HornRule& rule : h.rules) {
    vars.insert(rule.head);
    vars.insert(rule.body.begin(), rule.body.end());
  }
  return {vars.begin(), vars.end()};
}

void check_var(const std::string& name, int line) {
  if (!valid_var_name(name)) {
    throw ParseError("invalid variable name '" + name + "'", line, 1);
  }
}

}  // namespace

HornTheory parse_horn(const std::string& text) {
  HornTheory h;
  bool seen_goal = false;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("goal", 0) == 0 &&
        (line.size() == 4 || std::isspace(static_cast<unsigned char>(
                                 line[4])))) {
      if (seen_goal) {
        throw ParseError("duplicate goal header", line_no, 1);
      }
      h.goal = trim(line.substr(4));
      check_var(h.goal, line_no);
      seen_goal = true;
      continue;
    }
    size_t arrow = line.find("->");
    if (arrow == std::string::npos) {
      throw ParseError("expected 'goal g' or a rule with '->'", line_no, 1);
    }
    HornRule rule;
    rule.head = trim(line.substr(arrow + 2));
    check_var(rule.head, line_no);
    std::string body = trim(line.substr(0, arrow));
    size_t at = 0;
    while (at < body.size()) {
      size_t amp = body.find('&', at);
      if (amp == std::string::npos) amp = body.size();
      std::string var = trim(body.substr(at, amp - at));
      check_var(var, line_no);
      rule.body.push_back(std::move(var));
      at = amp + 1;
    }
    h.rules.push_back(std::move(rule));
  }
  if (!seen_goal) {
    throw ParseError("missing 'goal' header", line_no, 1);
  }
  h.vars = variable_set(h);
  return h;
}

std::string print_horn(const HornTheory& h) {
  std::string out = "goal " + h.goal + "\n";
  for (const HornRule& rule : h.rules) {
    for (size_t i = 0; i < rule.body.size(); ++i) {
      if (i > 0) out += " & ";
      out += rule.body[i];
    }
    out += rule.body.empty() ? "-> " : " -> ";
    out += rule.head;
    out += "\n";
  }
  return out;
}

bool horn_entails(const HornTheory& h) {
  std::set<std::string> derived;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const HornRule& rule : h.rules) {
      if (derived.count(rule.head)) continue;
      bool fire = true;
      for (const std::string& v : rule.body) {
        if (!derived.count(v)) {
          fire = false;
          break;
        }
      }
      if (fire) {
        derived.insert(rule.head);
        changed = true;
      }
    }
  }
  return derived.count(h.goal) > 0;
}

HornInstance gen_horn_instance(const HornTheory& h, VocabularyPtr vocab) {
  HornTheory t = h;
  check_var(t.goal, 0);
  for (const HornRule& rule : t.rules) {
    check_var(rule.head, 0);
    for (const std::string& v : rule.body) check_var(v, 0);
  }
  HornRule lead{{t.goal}, t.goal};
  if (t.rules.empty() || !(t.rules[0] == lead)) {
    t.rules.insert(t.rules.begin(), lead);
  }
  std::vector<std::string> vars = variable_set(t);

  if (!vocab) vocab = std::make_shared<Vocabulary>();
  HornInstance inst;
  inst.kb.fragment = Fragment::Plain;
  inst.kb.vocab = vocab;

  RoleId link = vocab->role_id("t");
  RoleId sink = vocab->role_id("s");
  auto p_of = [&](const std::string& v) { return vocab->role_id("p_" + v); };
  auto elem = [&](size_t rule, size_t idx) {
    return vocab->ind_id("e" + std::to_string(rule + 1) + "_" +
                         std::to_string(idx));
  };
  IndId f = vocab->ind_id("f");

  // Chains, one per rule, head on top.
  for (size_t i = 0; i < t.rules.size(); ++i) {
    const HornRule& rule = t.rules[i];
    size_t m = rule.body.size();
    inst.kb.abox.role_assertions.push_back(
        {p_of(rule.head), elem(i, m + 1), elem(i, m)});
    for (size_t l = m; l >= 1; --l) {
      inst.kb.abox.role_assertions.push_back(
          {p_of(rule.body[l - 1]), elem(i, l), elem(i, l - 1)});
    }
    inst.kb.abox.role_assertions.push_back({sink, elem(i, 0), f});
  }
  // Links from below each body position to the chain tops deriving it.
  for (size_t i = 0; i < t.rules.size(); ++i) {
    for (size_t l = 1; l <= t.rules[i].body.size(); ++l) {
      const std::string& v = t.rules[i].body[l - 1];
      for (size_t j = 0; j < t.rules.size(); ++j) {
        if (t.rules[j].head != v) continue;
        inst.kb.abox.role_assertions.push_back(
            {link, elem(i, l - 1), elem(j, t.rules[j].body.size() + 1)});
      }
    }
  }

  // Query levels: level 1 certifies positions derivable by a fact, level k
  // allows one deriving rule whose body is certified at level k-1.
  NREPtr anyp;
  NREPtr hop;
  for (const std::string& v : vars) {
    NREPtr p = NRE::make_role(RoleExpr{p_of(v), false});
    NREPtr seg = NRE::concat(
        p, NRE::concat(NRE::make_role(RoleExpr{link, false}), p));
    anyp = anyp ? NRE::alternative(anyp, p) : p;
    hop = hop ? NRE::alternative(hop, seg) : seg;
  }
  NREPtr s_step = NRE::make_role(RoleExpr{sink, false});
  NREPtr level = NRE::concat(hop, s_step);
  for (size_t k = 2; k <= vars.size(); ++k) {
    NREPtr loop = NRE::star(NRE::concat(NRE::test(level), anyp));
    level = NRE::concat(hop, NRE::concat(loop, s_step));
  }
  inst.query = level;
  inst.from = elem(0, 1);
  inst.to = f;
  return inst;
}

}  // namespace nrpq
