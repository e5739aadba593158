// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Nested NFAs: an indexed family of automata whose test transitions
// reference strictly higher-indexed automata. An NNFAPart designates a
// start state and a final-state set inside one member automaton.

#ifndef NRPQ_NNFA_HPP
#define NRPQ_NNFA_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nrpq/vocab.hpp"

namespace nrpq {

using StateId = uint32_t;

struct NNFALabel {
  enum class Kind { Role, ConceptTest, NominalTest, NestedTest };

  Kind kind = Kind::Role;
  RoleExpr role{RoleId{0}, false};
  ConceptId concept_name{0};
  IndId individual{0};
  std::vector<uint32_t> tests;  // referenced automaton indices, ascending

  static NNFALabel make_role(RoleExpr r) {
    NNFALabel l;
    l.kind = Kind::Role;
    l.role = r;
    return l;
  }
  static NNFALabel concept_test(ConceptId a) {
    NNFALabel l;
    l.kind = Kind::ConceptTest;
    l.concept_name = a;
    return l;
  }
  static NNFALabel nominal_test(IndId a) {
    NNFALabel l;
    l.kind = Kind::NominalTest;
    l.individual = a;
    return l;
  }
  static NNFALabel nested_test(std::vector<uint32_t> refs) {
    NNFALabel l;
    l.kind = Kind::NestedTest;
    l.tests = std::move(refs);
    return l;
  }

  bool operator==(const NNFALabel&) const = default;
};

struct NNFATransition {
  StateId from;
  NNFALabel label;
  StateId to;
  bool operator==(const NNFATransition&) const = default;
};

struct Automaton {
  std::vector<StateId> states;  // sorted global ids
  StateId initial = 0;
  std::vector<StateId> finals;  // sorted
  std::vector<NNFATransition> transitions;
  bool operator==(const Automaton&) const = default;
};

// State ids are global across the family, so state sets are disjoint by
// construction; owner maps each state to its automaton's index.
struct NNFA {
  std::vector<Automaton> automata;
  std::vector<uint32_t> owner;
  std::vector<std::string> state_names;

  uint32_t num_states() const { return static_cast<uint32_t>(owner.size()); }
  bool reduced() const;
  bool operator==(const NNFA&) const = default;
};

using NNFAPtr = std::shared_ptr<const NNFA>;

// The automaton fragment 𝔄 restricted to start state s₀ and final set F₀,
// both within a single member automaton.
struct NNFAPart {
  NNFAPtr nnfa;
  StateId start = 0;
  std::vector<StateId> finals;  // sorted
  // Optional display text (the source expression); ignored by comparisons.
  std::shared_ptr<const std::string> display;

  uint32_t automaton() const { return nnfa->owner[start]; }

  bool operator==(const NNFAPart& o) const {
    return nnfa == o.nnfa && start == o.start && finals == o.finals;
  }
};

// Checks the structural invariants (state ownership, index constraint
// l < j on nested tests, initial/final membership); throws InternalError.
void validate_nnfa(const NNFA& n);

// Splits every multi-index test transition into a chain of single-index
// test transitions through fresh states. Already-reduced input is returned
// unchanged.
NNFA reduce_nnfa(const NNFA& n);

// Nesting rank per automaton: 0 without nested tests, otherwise 1 + the
// maximum level over referenced automata.
std::vector<uint32_t> level_of(const NNFA& n);

// Fresh-state helper shared by reduce_nnfa and manual builders.
StateId add_state(NNFA& n, uint32_t automaton, const std::string& name);

std::string print_part(const NNFAPart& part);

}  // namespace nrpq

#endif  // NRPQ_NNFA_HPP
