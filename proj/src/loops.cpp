// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/loops.hpp"

#include <algorithm>

namespace nrpq {

LoopTables::LoopTables(NNFAPtr nnfa, const NormalizedTBox& tbox,
                       VocabularyPtr vocab)
    : nnfa_(std::move(nnfa)), base_(tbox), vocab_(std::move(vocab)) {
  if (!nnfa_->reduced()) {
    throw InternalError("loop analysis requires a reduced automaton");
  }
  state_concept_.reserve(nnfa_->num_states());
  for (StateId s = 0; s < nnfa_->num_states(); ++s) {
    state_concept_.push_back(
        vocab_->fresh_concept("A_s" + std::to_string(s)));
  }
}

SaturatedTBox& LoopTables::extension(
    uint32_t focus, const std::vector<StateId>& extra_finals) {
  auto key = std::make_pair(focus, extra_finals);
  auto it = extensions_.find(key);
  if (it != extensions_.end()) return *it->second.sat;

  Extension& ext = extensions_[std::move(key)];
  NormalizedTBox t = base_;
  for (uint32_t j = focus + 1; j < nnfa_->automata.size(); ++j) {
    for (StateId f : nnfa_->automata[j].finals) {
      t.top.push_back(state_concept_[f]);
    }
  }
  for (StateId f : extra_finals) t.top.push_back(state_concept_[f]);
  for (const Automaton& a : nnfa_->automata) {
    for (const NNFATransition& tr : a.transitions) {
      ConceptId from = state_concept_[tr.from];
      ConceptId to = state_concept_[tr.to];
      switch (tr.label.kind) {
        case NNFALabel::Kind::Role:
          t.exist_lhs.push_back(ExistLhsAxiom{tr.label.role, to, from});
          break;
        case NNFALabel::Kind::ConceptTest:
          t.conj_lhs.push_back(
              ConjLhsAxiom{to, tr.label.concept_name, from});
          break;
        case NNFALabel::Kind::NestedTest: {
          StateId init = nnfa_->automata[tr.label.tests[0]].initial;
          t.conj_lhs.push_back(ConjLhsAxiom{to, state_concept_[init], from});
          break;
        }
        case NNFALabel::Kind::NominalTest:
          // Anonymous elements never satisfy a nominal test, so the
          // transition contributes nothing here.
          break;
      }
    }
  }
  ext.tbox = std::move(t);
  ext.sat = std::make_unique<SaturatedTBox>(ext.tbox, vocab_);
  return *ext.sat;
}

bool LoopTables::decide(const ConceptSet& c, StateId s1,
                        const ConceptSet& also, SaturatedTBox& sat) {
  ConceptSet lhs = c;
  for (ConceptId a : also) set_insert(lhs, a);
  return sat.entails_subsumption(lhs, make_set({state_concept_[s1]}));
}

bool LoopTables::in_loop(const ConceptSet& c, StateId s1, StateId s2,
                         const std::vector<StateId>& gamma) {
  uint32_t focus = nnfa_->owner[s1];
  if (nnfa_->owner[s2] != focus) {
    throw InternalError("loop endpoints must share an automaton");
  }
  auto key = std::make_tuple(c, s1, s2, gamma);
  auto it = loop_memo_.find(key);
  if (it != loop_memo_.end()) return it->second;

  ConceptSet also = make_set({state_concept_[s2]});
  for (StateId u : gamma) {
    if (nnfa_->owner[u] <= focus) {
      throw InternalError("loop gamma states must come from above the focus");
    }
    set_insert(also, state_concept_[u]);
  }
  bool result = decide(c, s1, also, extension(focus, {}));
  loop_memo_.emplace(std::move(key), result);
  return result;
}

bool LoopTables::in_floop(const ConceptSet& c, StateId s1,
                          const std::vector<StateId>& finals,
                          const std::vector<StateId>& gamma) {
  uint32_t focus = nnfa_->owner[s1];
  std::vector<StateId> sorted_finals = finals;
  std::sort(sorted_finals.begin(), sorted_finals.end());
  sorted_finals.erase(
      std::unique(sorted_finals.begin(), sorted_finals.end()),
      sorted_finals.end());
  for (StateId f : sorted_finals) {
    if (nnfa_->owner[f] != focus) {
      throw InternalError("floop finals must share the focus automaton");
    }
  }
  auto key = std::make_tuple(c, s1, sorted_finals, gamma);
  auto it = floop_memo_.find(key);
  if (it != floop_memo_.end()) return it->second;

  ConceptSet also;
  for (StateId u : gamma) {
    if (nnfa_->owner[u] <= focus) {
      throw InternalError("loop gamma states must come from above the focus");
    }
    set_insert(also, state_concept_[u]);
  }
  bool result = decide(c, s1, also, extension(focus, sorted_finals));
  floop_memo_.emplace(std::move(key), result);
  return result;
}

std::string LoopTables::concept_key(const ConceptSet& c) const {
  if (c.empty()) return "top";
  std::string out;
  for (size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out += "&";
    out += vocab_->concept_name(c[i]);
  }
  return out;
}

std::string LoopTables::state_list(const std::vector<StateId>& states) const {
  std::string out = "{";
  for (size_t i = 0; i < states.size(); ++i) {
    if (i > 0) out += ",";
    out += nnfa_->state_names[states[i]];
  }
  return out + "}";
}

std::string LoopTables::dump() const {
  std::string out;
  for (const auto& [key, value] : loop_memo_) {
    const auto& [c, s1, s2, gamma] = key;
    out += "LOOP " + concept_key(c) + " " + nnfa_->state_names[s1] + " " +
           nnfa_->state_names[s2] + " " + state_list(gamma) + " -> " +
           (value ? "true" : "false") + "\n";
  }
  for (const auto& [key, value] : floop_memo_) {
    const auto& [c, s1, finals, gamma] = key;
    out += "FLOOP " + concept_key(c) + " " + nnfa_->state_names[s1] + " " +
           state_list(finals) + " " + state_list(gamma) + " -> " +
           (value ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace nrpq
