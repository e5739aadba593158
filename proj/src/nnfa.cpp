// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/nnfa.hpp"

#include <algorithm>

namespace nrpq {

bool NNFA::reduced() const {
  for (const Automaton& a : automata) {
    for (const NNFATransition& t : a.transitions) {
      if (t.label.kind == NNFALabel::Kind::NestedTest &&
          t.label.tests.size() != 1) {
        return false;
      }
    }
  }
  return true;
}

void validate_nnfa(const NNFA& n) {
  if (n.owner.size() != n.state_names.size()) {
    throw InternalError("nnfa state bookkeeping out of sync");
  }
  for (uint32_t i = 0; i < n.automata.size(); ++i) {
    const Automaton& a = n.automata[i];
    auto owned = [&](StateId s) {
      return s < n.owner.size() && n.owner[s] == i &&
             std::binary_search(a.states.begin(), a.states.end(), s);
    };
    if (!owned(a.initial)) {
      throw InternalError("nnfa initial state outside its automaton");
    }
    for (StateId f : a.finals) {
      if (!owned(f)) {
        throw InternalError("nnfa final state outside its automaton");
      }
    }
    for (const NNFATransition& t : a.transitions) {
      if (!owned(t.from) || !owned(t.to)) {
        throw InternalError("nnfa transition crosses automata");
      }
      if (t.label.kind == NNFALabel::Kind::NestedTest) {
        if (t.label.tests.empty()) {
          throw InternalError("nnfa nested test without references");
        }
        for (uint32_t j : t.label.tests) {
          if (j <= i || j >= n.automata.size()) {
            throw InternalError(
                "nnfa nested test must reference a higher-indexed automaton");
          }
        }
      }
    }
  }
}

StateId add_state(NNFA& n, uint32_t automaton, const std::string& name) {
  StateId s = n.num_states();
  n.owner.push_back(automaton);
  n.state_names.push_back(name.empty() ? "q" + std::to_string(s) : name);
  std::vector<StateId>& states = n.automata[automaton].states;
  states.insert(std::lower_bound(states.begin(), states.end(), s), s);
  return s;
}

NNFA reduce_nnfa(const NNFA& n) {
  if (n.reduced()) return n;
  NNFA out = n;
  for (uint32_t i = 0; i < out.automata.size(); ++i) {
    std::vector<NNFATransition> rebuilt;
    // Take transitions by value: add_state mutates the automaton.
    std::vector<NNFATransition> original =
        std::move(out.automata[i].transitions);
    for (const NNFATransition& t : original) {
      if (t.label.kind != NNFALabel::Kind::NestedTest ||
          t.label.tests.size() == 1) {
        rebuilt.push_back(t);
        continue;
      }
      StateId from = t.from;
      for (size_t k = 0; k < t.label.tests.size(); ++k) {
        StateId to = k + 1 == t.label.tests.size()
                         ? t.to
                         : add_state(out, i, "");
        rebuilt.push_back(NNFATransition{
            from, NNFALabel::nested_test({t.label.tests[k]}), to});
        from = to;
      }
    }
    out.automata[i].transitions = std::move(rebuilt);
  }
  validate_nnfa(out);
  return out;
}

std::vector<uint32_t> level_of(const NNFA& n) {
  std::vector<uint32_t> levels(n.automata.size(), 0);
  // The index constraint orders references upward, so a reverse sweep
  // settles every level in one pass.
  for (size_t i = n.automata.size(); i-- > 0;) {
    uint32_t level = 0;
    for (const NNFATransition& t : n.automata[i].transitions) {
      if (t.label.kind != NNFALabel::Kind::NestedTest) continue;
      for (uint32_t j : t.label.tests) {
        level = std::max(level, levels[j] + 1);
      }
    }
    levels[i] = level;
  }
  return levels;
}

std::string print_part(const NNFAPart& part) {
  if (part.display) return *part.display;
  const NNFA& n = *part.nnfa;
  std::string out =
      "aut" + std::to_string(part.automaton()) + "[" +
      n.state_names[part.start] + "->";
  for (size_t i = 0; i < part.finals.size(); ++i) {
    if (i > 0) out += "|";
    out += n.state_names[part.finals[i]];
  }
  out += "]";
  return out;
}

}  // namespace nrpq
