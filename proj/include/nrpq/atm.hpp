// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Alternating Turing machines restricted to the cells of their input word:
// the machine type, its text format, an acceptance oracle, and a generator
// that turns a machine into a knowledge base plus a single-atom query whose
// certain answer reproduces the acceptance verdict.

#ifndef NRPQ_ATM_HPP
#define NRPQ_ATM_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nrpq/kb.hpp"
#include "nrpq/nnfa.hpp"
#include "nrpq/vocab.hpp"

namespace nrpq {

// One entry of a transition table: successor state, symbol written over the
// scanned cell, and head displacement.
struct ATMMove {
  std::string state;
  char write = 'b';  // '0', '1', or 'b' for blank
  int dir = 0;       // -1, 0, +1
  bool operator==(const ATMMove&) const = default;
};

// An alternating Turing machine over the alphabet {0,1} with blank 'b'. The
// machine runs on exactly the cells occupied by its input word; moving the
// head off either end is an error, not a rejection. States absent from
// `universal` are existential. Every non-halting state has exactly two
// successor moves per scanned symbol, delta1 and delta2, which may agree
// (assumption (iii)); the halting states take no transitions. The initial
// state must be existential and distinct from both halting states
// (assumption (i)). Machines are expected to blank the whole tape before
// halting (assumption (ii)); the simulator reports violations as warnings.
struct ATMSpec {
  std::vector<std::string> states;     // declared order, duplicate-free
  std::vector<std::string> universal;  // subset of states
  std::string init, accept, reject;
  std::string word;  // non-empty, over {0,1}
  std::map<std::pair<std::string, char>, ATMMove> delta1, delta2;

  size_t tape_cells() const { return word.size(); }
  bool is_universal(const std::string& s) const;
};

// Parses the sectioned text format:
//
//   states s0 u p q acc rej
//   universal u
//   init s0
//   accept acc
//   reject rej
//   word 11
//   delta1
//   s0,1 -> u,1,0
//   u,1 -> p,b,+1
//   delta2
//   s0,1 -> u,1,0
//   u,1 -> q,b,+1
//
// '#' starts a comment. The `universal` line may be omitted when the set is
// empty. Rows listed after a `delta1` or `delta2` header belong to that
// table; symbols are 0, 1, or b, and moves are -1, 0, or +1. The parsed
// machine is validated before it is returned.
ATMSpec parse_atm(const std::string& text);

std::string print_atm(const ATMSpec& m);

// Structural checks; throws ParseError naming the violated assumption. In
// particular, assumption (i) requires the initial state to differ from the
// halting states, and assumption (iii) requires both tables to cover every
// non-halting state and symbol while the halting states take no rows.
void validate_atm(const ATMSpec& m);

// Acceptance oracle: AND/OR search over configurations, memoized, with a
// configuration revisited on the current path treated as non-accepting.
// Existential states need one of their two moves to accept, universal
// states both. A move that takes the head off the tape throws ParseError.
// Halting configurations with a non-blank cell are reported through
// `warnings` (assumption (ii)), deduplicated and sorted.
bool simulate_atm(const ATMSpec& m,
                  std::vector<std::string>* warnings = nullptr);

// A generated hardness instance. The machine accepts its word if and only
// if (root, root) satisfies the query atom over the knowledge base, so a
// Boolean query asking query(root, root) has answer true exactly then.
struct ATMInstance {
  KB kb;
  NNFAPart query;
  IndId root{0};
};

// Builds the instance for a validated machine. `fragment` selects the shape
// of the knowledge base and must be Fragment::DLLiteCore or Fragment::EL;
// both give the same certain answer. The query is one nested family: a
// control automaton walks a computation tree encoded by the anonymous part
// of the canonical model, and one test automaton per tape cell replays the
// chosen branch backward to check that the cell evolves consistently.
ATMInstance gen_atm_instance(const ATMSpec& m, Fragment fragment,
                             VocabularyPtr vocab = nullptr);

}  // namespace nrpq

#endif  // NRPQ_ATM_HPP
