// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/interpretation.hpp"

#include <algorithm>
#include <sstream>

namespace nrpq {

FiniteInterpretation::FiniteInterpretation(VocabularyPtr vocab)
    : vocab_(std::move(vocab)) {}

ObjId FiniteInterpretation::add_object(const std::string& preferred_name) {
  std::string name = preferred_name;
  int suffix = 1;
  while (by_name_.count(name) != 0) {
    name = preferred_name + "_" + std::to_string(suffix++);
  }
  ObjId o = static_cast<ObjId>(names_.size());
  names_.push_back(name);
  by_name_.emplace(std::move(name), o);
  labels_.emplace_back();
  for (auto& kv : fwd_) kv.second.emplace_back();
  for (auto& kv : bwd_) kv.second.emplace_back();
  return o;
}

void FiniteInterpretation::bind_individual(IndId ind, ObjId o) {
  ind_map_[ind] = o;
}

void FiniteInterpretation::add_label(ObjId o, ConceptId a) {
  set_insert(labels_[o], a);
}

void FiniteInterpretation::add_edge(RoleExpr r, ObjId from, ObjId to) {
  if (r.inverted) std::swap(from, to);
  Edge e{r.name, from, to};
  auto& out = fwd_[r.name];
  auto& in = bwd_[r.name];
  out.resize(names_.size());
  in.resize(names_.size());
  auto& vec = out[from];
  if (std::find(vec.begin(), vec.end(), to) != vec.end()) return;
  vec.insert(std::lower_bound(vec.begin(), vec.end(), to), to);
  auto& rvec = in[to];
  rvec.insert(std::lower_bound(rvec.begin(), rvec.end(), from), from);
  edges_.push_back(e);
}

bool FiniteInterpretation::has_label(ObjId o, ConceptId a) const {
  return set_contains(labels_[o], a);
}

const std::vector<ObjId>& FiniteInterpretation::successors(ObjId o,
                                                           RoleExpr r) const {
  const auto& table = r.inverted ? bwd_ : fwd_;
  auto it = table.find(r.name);
  if (it == table.end() || o >= it->second.size()) return no_succ_;
  return it->second[o];
}

std::vector<std::pair<ObjId, ObjId>> FiniteInterpretation::edge_set(
    RoleExpr r) const {
  std::vector<std::pair<ObjId, ObjId>> out;
  const auto& table = r.inverted ? bwd_ : fwd_;
  auto it = table.find(r.name);
  if (it == table.end()) return out;
  for (ObjId o = 0; o < it->second.size(); ++o) {
    for (ObjId d : it->second[o]) out.emplace_back(o, d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const ObjId* FiniteInterpretation::find_individual(IndId ind) const {
  auto it = ind_map_.find(ind);
  return it == ind_map_.end() ? nullptr : &it->second;
}

std::string FiniteInterpretation::to_plain_text() const {
  std::ostringstream out;
  for (ObjId o = 0; o < names_.size(); ++o) {
    for (ConceptId a : labels_[o]) {
      out << vocab_->concept_name(a) << "(" << names_[o] << ")\n";
    }
  }
  for (const Edge& e : edges_) {
    out << vocab_->role_name(e.role) << "(" << names_[e.from] << ", "
        << names_[e.to] << ")\n";
  }
  return out.str();
}

FiniteInterpretation from_plain_kb(const KB& kb) {
  if (!kb.tbox.concept_inclusions.empty() ||
      !kb.tbox.role_inclusions.empty() ||
      !kb.tbox.role_disjointness.empty()) {
    throw ParseError("a plain graph must not contain TBox axioms");
  }
  FiniteInterpretation interp(kb.vocab);
  for (IndId ind : kb.individuals()) {
    ObjId o = interp.add_object(kb.vocab->ind_name(ind));
    interp.bind_individual(ind, o);
  }
  for (const ConceptAssertion& ca : kb.abox.concept_assertions) {
    if (ca.c->kind != Concept::Kind::Name) {
      throw ParseError("a plain graph admits only concept-name labels");
    }
    interp.add_label(*interp.find_individual(ca.ind), ca.c->name);
  }
  for (const RoleAssertion& ra : kb.abox.role_assertions) {
    interp.add_edge(RoleExpr{ra.role, false}, *interp.find_individual(ra.from),
                    *interp.find_individual(ra.to));
  }
  return interp;
}

}  // namespace nrpq
