// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// ABox-independent exhaustive query rewriting: existential variables are
// merged and dropped one representative at a time, with their atoms
// restructured around a freshly entailed anonymous parent. The closure is
// computed as a breadth-first fixpoint over canonicalized queries.

#ifndef NRPQ_REWRITER_HPP
#define NRPQ_REWRITER_HPP

#include <string>
#include <vector>

#include "nrpq/loops.hpp"
#include "nrpq/query.hpp"
#include "nrpq/reasoner.hpp"

namespace nrpq {

// A key invariant under atom reordering and consistent renaming of
// existential variables; answer variables and individuals stay fixed.
// Automata are identified structurally, so distinct objects with equal
// shape canonicalize alike.
std::string canonical_query_form(const CN2RPQ& q, const Vocabulary& vocab);

// All queries obtainable by one full pass over the rewriting choices.
// Deduplicated by canonical form; the input query itself is not included
// unless a pass reproduces it.
std::vector<CN2RPQ> rewrite_step(const CN2RPQ& q, SaturatedTBox& sat,
                                 LoopTableSet& loops);

// The full closure: the input query plus everything reachable through
// rewrite_step, deduplicated by canonical form, in breadth-first discovery
// order. Depends only on the query and the TBox, never on an ABox.
std::vector<CN2RPQ> rewrite(const CN2RPQ& q, SaturatedTBox& sat,
                            LoopTableSet& loops);

}  // namespace nrpq

#endif  // NRPQ_REWRITER_HPP
