// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Query answering over ELHI-bot knowledge bases: the bounded reachability
// search for single atoms, entailment over the rewritten query set, and
// certain-answer enumeration by grounding.

#ifndef NRPQ_EVALUATOR_HPP
#define NRPQ_EVALUATOR_HPP

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "nrpq/loops.hpp"
#include "nrpq/query.hpp"
#include "nrpq/reasoner.hpp"
#include "nrpq/rewriter.hpp"

namespace nrpq {

// Endpoint pair for a single-atom check. An empty end asks whether some
// accepted path from start ends anywhere at all, anonymous elements
// included.
struct EvalTarget {
  IndId start;
  std::optional<IndId> end;
};

// Appends the given individuals to the knowledge base roster unless already
// present. Queries may mention individuals the ABox does not, and the
// grounding enumeration ranges over the roster.
void ensure_individuals(NormalizedKB& kb, const std::vector<IndId>& inds);

// Answering engine for one knowledge base. The TBox-level structures
// (saturation, loop tables, rewritings) depend only on the TBox, so a query
// rewritten against one engine may be evaluated by another engine sharing
// the same TBox; certain_answers accepts such precomputed rewritings.
//
// Queries evaluated here must be free of nominal tests inside nested
// expressions of the anonymous part semantics; use the free functions below
// or eliminate_nominal_tests to clear them first. Parts with nominal test
// transitions are still handled soundly at named individuals.
class Engine {
 public:
  explicit Engine(const NormalizedKB& kb);

  bool consistent() const { return reasoner_.consistent(); }

  // Single-atom check over the canonical model: true iff the pair lies in
  // the part's relation. Both endpoints named; requires a consistent KB.
  bool eval_atom(const NNFAPart& part, IndId a, IndId b);

  // As above with an anonymous right endpoint: true iff some accepted path
  // from a exists, ending at any element.
  bool eval_atom_anon(const NNFAPart& part, IndId a);

  bool eval_atom(const NNFAPart& part, const EvalTarget& target);

  // Boolean entailment: inconsistent KBs entail everything; otherwise the
  // query is rewritten and every rewriting member is tried under every
  // grounding of its variables.
  bool eval_query(const CN2RPQ& q);

  // Entailment over an already rewritten set of Boolean queries.
  bool eval_rewritten(const std::vector<CN2RPQ>& queries);

  // All certain answers, as tuples over the roster in answer-variable
  // order. Inconsistent KBs yield every tuple.
  std::set<std::vector<IndId>> certain_answers(const CN2RPQ& q);

  // As above with the rewriting of q precomputed (it is ABox-independent).
  std::set<std::vector<IndId>> certain_answers(
      const CN2RPQ& q, const std::vector<CN2RPQ>& rewriting);

  // The rewriting of q against this engine's TBox, input query first.
  std::vector<CN2RPQ> rewriting(const CN2RPQ& q);

  // Disabling the cross-call cache must not change any answer; used by the
  // memoization transparency check.
  void set_memo_enabled(bool on);

  // True while every accepted search has stayed within the per-call step
  // bound (ABox size times focus automaton size, plus one).
  bool step_bound_ok() const { return step_bound_ok_; }

  SaturatedTBox& sat() { return sat_; }
  KBReasoner& reasoner() { return reasoner_; }
  LoopTableSet& loop_tables() { return loops_; }
  const NormalizedKB& kb() const { return kb_; }

 private:
  // Everything eval_atom can say about one start individual: the named
  // individuals reachable at a final state, whether an accepted path may
  // end anonymously, and the deepest layer at which any acceptance was
  // first reached (for the step bound check).
  struct AtomOutcome {
    std::vector<IndId> ends;
    bool anon = false;
    size_t worst_accept_layer = 0;
  };
  using MemoKey = std::tuple<const NNFA*, StateId, std::vector<StateId>, IndId>;

  const AtomOutcome& atom_outcome(const NNFAPart& part, IndId a);
  AtomOutcome compute_outcome(const NNFAPart& part, IndId a);

  // Maximal discharged obligation set: states of higher automata whose
  // residual run succeeds from c. Larger sets only make loop entailments
  // easier, so the maximal one dominates all guesses.
  std::vector<StateId> gamma_star(const NNFAPtr& nnfa, uint32_t automaton,
                                  IndId c);

  bool holds_ground(const QueryAtom& atom,
                    const std::map<std::string, IndId>& env);
  bool eval_boolean(const CN2RPQ& q);

  NormalizedKB kb_;
  SaturatedTBox sat_;
  KBReasoner reasoner_;
  LoopTableSet loops_;
  std::map<IndId, size_t> ind_rank_;
  bool memo_enabled_ = true;
  bool step_bound_ok_ = true;
  std::map<MemoKey, AtomOutcome> memo_;
  // Holds the result when the cache is off; callers read it before the next
  // eval_atom call.
  AtomOutcome scratch_;
};

// One-call pipeline over a query that may contain nominal tests: the tests
// are eliminated, the marker facts joined to a copy of the KB, and the
// result evaluated there.
bool eval_query(const CN2RPQ& q, const NormalizedKB& kb);
std::set<std::vector<IndId>> certain_answers(const CN2RPQ& q,
                                             const NormalizedKB& kb);

}  // namespace nrpq

#endif  // NRPQ_EVALUATOR_HPP
