// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Propositional definite Horn theories and the graph instances whose query
// answers decide their goal entailment. The generated instances exercise
// the evaluation pipelines on deeply nested expressions with a known
// ground truth supplied by forward chaining.

#ifndef NRPQ_HORN_HPP
#define NRPQ_HORN_HPP

#include <string>
#include <vector>

#include "nrpq/kb.hpp"
#include "nrpq/nre.hpp"

namespace nrpq {

struct HornRule {
  std::vector<std::string> body;  // empty for a fact
  std::string head;
  bool operator==(const HornRule&) const = default;
};

struct HornTheory {
  std::vector<std::string> vars;  // sorted, duplicate-free
  std::vector<HornRule> rules;
  std::string goal;
  bool operator==(const HornTheory&) const = default;
};

// Text format, one statement per line with '#' comments:
//
//   goal g
//   a & b -> c
//   -> c
//
// The goal header is required and must appear exactly once. Variables are
// identifiers ([A-Za-z][A-Za-z0-9_]*). The variable set is derived from the
// rules and the goal.
HornTheory parse_horn(const std::string& text);

std::string print_horn(const HornTheory& h);

// Least-fixpoint forward chaining; true iff the goal is derivable.
bool horn_entails(const HornTheory& h);

// A Horn theory turned into a graph: assertions, a nested expression, and
// the pair that is an answer over the empty TBox exactly when the theory
// entails its goal.
struct HornInstance {
  KB kb;         // assertions only, fragment plain
  NREPtr query;  // the level-|V| expression
  IndId from, to;
};

// Per rule with body v1..vm and head w, a chain p_w(e^i_{m+1}, e^i_m),
// p_{v_m}(e^i_m, e^i_{m-1}), ..., p_{v_1}(e^i_1, e^i_0), s(e^i_0, f); a
// t-edge links the element below each body position to the chain top of
// every rule deriving that position's variable. The query descends a chain,
// jumps to a deriving rule, and recursively certifies that rule's body one
// position at a time, with recursion depth bounded by the variable count.
// A leading goal->goal rule is inserted when absent, so the designated pair
// (e^1_1, f) always exists. Malformed variable names are rejected.
HornInstance gen_horn_instance(const HornTheory& h,
                               VocabularyPtr vocab = nullptr);

}  // namespace nrpq

#endif  // NRPQ_HORN_HPP
