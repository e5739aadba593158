// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Reductions from nested queries to plain C2RPQs over an extended TBox, and
// the single-atom variant that turns query answering into an instance check.
//
// Both constructions allocate a fresh concept name per automaton state. The
// companion axioms make such a name hold at an element exactly when a run
// from its state can reach an accepting configuration, so nested tests
// become concept tests and a designated start state becomes an entailment
// target. The companion TBox always lies in ELI: it uses only top, atomic
// conjunction, and existential restrictions on the left-hand side.

#ifndef NRPQ_REDUCTIONS_HPP
#define NRPQ_REDUCTIONS_HPP

#include "nrpq/kb.hpp"
#include "nrpq/normalize.hpp"
#include "nrpq/query.hpp"

namespace nrpq {

// Result of translate_cn2rpq: companion axioms plus the flattened query.
struct TranslatedQuery {
  TBox tbox;     // companion axioms over the fresh state concepts
  CN2RPQ query;  // same atom structure, every part a plain NFA
};

// Replaces every nested test in the query's automata by a concept test on
// the fresh name of the tested automaton's initial state, and returns the
// companion axioms that tie those names to the automaton semantics. Certain
// answers are preserved: ans(q, (T, A)) = ans(query, (T + tbox, A)) for
// every KB (T, A) sharing the vocabulary. Requires reduced parts; nominal
// tests must have been eliminated beforehand.
TranslatedQuery translate_cn2rpq(const CN2RPQ& q, Vocabulary& vocab);

// Instance check for a single query atom: (a, b) is a certain answer of the
// atom over (T, A) iff (T + tbox, A + {marker}) entails goal. The marker
// concept stands for the target individual b; the goal concept is the fresh
// name of the construction's start state, asserted at a.
struct ReductionInstance {
  TBox tbox;
  ConceptFact marker;  // add to the ABox
  ConceptFact goal;    // entailment target
};

// Builds the instance for the part evaluated from a to b. The part's
// automaton is copied, a marker test into a single accepting state is
// appended behind the designated finals, and the copy is wrapped in a
// two-state automaton whose only transition tests it, so the goal holds at
// a exactly when some run from the part's start state ends at b. Requires a
// reduced part without nominal tests.
ReductionInstance reduce_n2rpq_to_instance(const NNFAPart& e, IndId a,
                                           IndId b, Vocabulary& vocab);

// The composed pipeline: eliminate nominal tests, build the instance,
// extend the KB, and decide by assertion entailment. Agrees with the
// rewriting-based evaluator on named pairs. The KB must be consistent;
// an inconsistent KB violates the contract and raises InternalError.
bool answer_via_reduction(const NNFAPart& e, const NormalizedKB& kb, IndId a,
                          IndId b);

}  // namespace nrpq

#endif  // NRPQ_REDUCTIONS_HPP
