// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Query evaluation over finite interpretations: the plain-graph engine and
// the one-sided oracle over materializations.

#ifndef NRPQ_GRAPHEVAL_HPP
#define NRPQ_GRAPHEVAL_HPP

#include <set>
#include <utility>
#include <vector>

#include "nrpq/interpretation.hpp"
#include "nrpq/query.hpp"

namespace nrpq {

using ObjPair = std::pair<ObjId, ObjId>;

// Exact pair set for the designated part, computed bottom-up: automata are
// processed in decreasing index order, so the objects satisfying each
// nested test are known before the referencing automaton runs. Product
// reachability over objects x states, polynomial in both.
std::set<ObjPair> eval_on_interpretation(const NNFAPart& part,
                                         const FiniteInterpretation& i);

// Backtracking join over the atoms, using eval_on_interpretation pair sets
// as relations. Boolean queries yield the empty tuple when satisfiable.
std::set<std::vector<ObjId>> answers_on_interpretation(
    const CN2RPQ& q, const FiniteInterpretation& i);

}  // namespace nrpq

#endif  // NRPQ_GRAPHEVAL_HPP
