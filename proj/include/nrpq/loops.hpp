// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Membership tests for anonymous-part loops: can a run enter the anonymous
// subtree below an element whose type includes C at state s1 and return to
// the same element at state s2 (or stop at a final state)? Decided through
// an auxiliary TBox with one fresh name per automaton state.

#ifndef NRPQ_LOOPS_HPP
#define NRPQ_LOOPS_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nrpq/nnfa.hpp"
#include "nrpq/reasoner.hpp"

namespace nrpq {

class LoopTables {
 public:
  // The automaton must be reduced. State names A_s are drawn fresh from the
  // vocabulary; the base TBox is extended per focus automaton and final set
  // on demand.
  LoopTables(NNFAPtr nnfa, const NormalizedTBox& tbox, VocabularyPtr vocab);

  // True iff a partial run below an element of type c (conjunction of
  // names; empty = top) leads from s1 back to the element at s2, with
  // test leaves over states in gamma left open. Memoized.
  bool in_loop(const ConceptSet& c, StateId s1, StateId s2,
               const std::vector<StateId>& gamma);

  // As in_loop, but the run may instead stop inside the anonymous part at
  // any state of finals.
  bool in_floop(const ConceptSet& c, StateId s1,
                const std::vector<StateId>& finals,
                const std::vector<StateId>& gamma);

  // Every memoized entry, one per line: `LOOP C s1 s2 {gamma} -> bool` and
  // `FLOOP C s1 {finals} {gamma} -> bool`, in key order.
  std::string dump() const;

  size_t memo_size() const { return loop_memo_.size() + floop_memo_.size(); }
  const NNFAPtr& nnfa() const { return nnfa_; }

 private:
  struct Extension {
    NormalizedTBox tbox;
    std::unique_ptr<SaturatedTBox> sat;
  };

  SaturatedTBox& extension(uint32_t focus,
                           const std::vector<StateId>& extra_finals);
  bool decide(const ConceptSet& c, StateId s1, const ConceptSet& also,
              SaturatedTBox& sat);
  std::string concept_key(const ConceptSet& c) const;
  std::string state_list(const std::vector<StateId>& states) const;

  NNFAPtr nnfa_;
  NormalizedTBox base_;
  VocabularyPtr vocab_;
  std::vector<ConceptId> state_concept_;
  std::map<std::pair<uint32_t, std::vector<StateId>>, Extension> extensions_;
  std::map<std::tuple<ConceptSet, StateId, StateId, std::vector<StateId>>,
           bool>
      loop_memo_;
  std::map<std::tuple<ConceptSet, StateId, std::vector<StateId>,
                      std::vector<StateId>>,
           bool>
      floop_memo_;
};

// One LoopTables instance per automaton family, created on demand. The
// referenced TBox must outlive the set.
class LoopTableSet {
 public:
  LoopTableSet(const NormalizedTBox& tbox, VocabularyPtr vocab)
      : tbox_(tbox), vocab_(std::move(vocab)) {}

  LoopTables& tables_for(const NNFAPtr& nnfa) {
    for (auto& [key, tables] : tables_) {
      if (key == nnfa.get()) return *tables;
    }
    tables_.emplace_back(nnfa.get(),
                         std::make_unique<LoopTables>(nnfa, tbox_, vocab_));
    return *tables_.back().second;
  }

  // Concatenated per-automaton dumps, in creation order.
  std::string dump() const {
    std::string out;
    for (const auto& [key, tables] : tables_) out += tables->dump();
    return out;
  }

  size_t memo_size() const {
    size_t n = 0;
    for (const auto& [key, tables] : tables_) n += tables->memo_size();
    return n;
  }

 private:
  const NormalizedTBox& tbox_;
  VocabularyPtr vocab_;
  std::vector<std::pair<const NNFA*, std::unique_ptr<LoopTables>>> tables_;
};

}  // namespace nrpq

#endif  // NRPQ_LOOPS_HPP
