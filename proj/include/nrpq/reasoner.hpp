// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Consequence-based saturation for normalized TBoxes, plus knowledge-base
// level reasoning: subsumption between concept-name conjunctions, role
// hierarchy entailment, instance checking, satisfiability, and depth-bounded
// materialization of the canonical model.

#ifndef NRPQ_REASONER_HPP
#define NRPQ_REASONER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "nrpq/interpretation.hpp"
#include "nrpq/normalize.hpp"

namespace nrpq {

// Identifier of a registered concept-name conjunction (empty set = top).
using NodeId = uint32_t;

// Saturates a normalized TBox on demand. Conjunctions of concept names are
// registered and closed under the completion rules; each registered
// conjunction tracks its entailed concept-name supers, an inconsistency
// flag, and its entailed existential successors. Registration is monotone:
// adding a conjunction never changes answers for previously registered ones.
class SaturatedTBox {
 public:
  struct Existential {
    RoleExpr role;
    ConceptId seed;   // the B of the generating axiom A <= exists r.B
    NodeId target;    // registered widened successor conjunction
  };

  SaturatedTBox(const NormalizedTBox& tbox, VocabularyPtr vocab);

  NodeId register_conjunction(ConceptSet members);

  const ConceptSet& members(NodeId n) const { return nodes_[n].members; }

  // Entailed concept-name supers of the conjunction (always a superset of
  // its members). Meaningless when the node is inconsistent.
  const ConceptSet& supers(NodeId n) const { return nodes_[n].supers; }

  // True iff the conjunction is unsatisfiable under the TBox.
  bool inconsistent(NodeId n) const { return nodes_[n].bot; }

  // True iff every name of d is entailed by c (or c is unsatisfiable).
  bool entails_subsumption(const ConceptSet& c, const ConceptSet& d);

  // Entailed existential successors, duplicate-free by (role, target) in
  // first-axiom order.
  std::vector<Existential> existentials(NodeId n) const;

  // Reflexive-transitive role hierarchy over the roles of the TBox, closed
  // under inversion. Expressions outside the TBox subsume only themselves.
  bool role_sub(RoleExpr sub, RoleExpr sup) const;

  // All expressions s with role_sub(r, s), including r itself.
  std::vector<RoleExpr> role_supers(RoleExpr r) const;

  // True iff some declared disjointness s & s' <= bot separates p and q:
  // an edge lying in both p and q (in either orientation) is forbidden.
  bool roles_disjoint(RoleExpr p, RoleExpr q) const;

  const NormalizedTBox& source() const { return tbox_; }
  const VocabularyPtr& vocab_ptr() const { return vocab_; }
  Vocabulary& vocab() { return *vocab_; }

  // Concept names occurring in the TBox, sorted.
  const std::vector<ConceptId>& tbox_concept_names() const { return names_; }

  // Role expressions occurring in the TBox (both orientations per name).
  const std::vector<RoleExpr>& tbox_role_exprs() const { return role_exprs_; }

  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    ConceptSet members;
    ConceptSet supers;
    bool bot = false;
    // Fired existential axioms: index into tbox_.exist_rhs -> target node.
    std::map<size_t, NodeId> fired;
  };

  NodeId lookup_or_create(ConceptSet members);
  void saturate();
  bool apply_rules(NodeId n);
  ConceptSet widen(NodeId parent, RoleExpr r, ConceptId seed) const;

  const NormalizedTBox& tbox_;
  VocabularyPtr vocab_;
  std::vector<ConceptId> names_;
  std::vector<RoleExpr> role_exprs_;

  // Role closure matrix over 2 * |roles in TBox| expression slots.
  std::unordered_map<RoleId, size_t> role_index_;
  std::vector<std::vector<bool>> role_closure_;

  std::vector<Node> nodes_;
  std::map<ConceptSet, NodeId> node_index_;
  bool saturating_ = false;
};

// ABox-level reasoning over a saturated TBox: entailed individual types,
// satisfiability, instance and role-edge entailment, materialization.
class KBReasoner {
 public:
  KBReasoner(SaturatedTBox& sat, const NormalizedKB& kb);

  bool consistent() const { return consistent_; }

  // True iff the KB entails a(ind). Requires a consistent KB.
  bool entails_assertion(ConceptId a, IndId ind) const;

  // All entailed concept names of the individual.
  const ConceptSet& ind_type(IndId ind) const;

  // Registered conjunction for the individual's entailed type.
  NodeId ind_node(IndId ind) const;

  // True iff some asserted edge yields (a, b) in r under the role hierarchy.
  bool entailed_role_edge(RoleExpr r, IndId a, IndId b) const;

  // Individuals d with entailed_role_edge(r, a, d); sorted, duplicate-free.
  // Adjacency is computed once per role expression and cached.
  const std::vector<IndId>& role_successors(RoleExpr r, IndId a) const;

  const std::vector<IndId>& individuals() const { return kb_.individuals; }

  size_t abox_size() const {
    return kb_.concept_facts.size() + kb_.role_facts.size();
  }

  // Restriction of the canonical model to individuals plus anonymous
  // elements at chain length <= depth. Requires a consistent KB.
  FiniteInterpretation materialize(int depth) const;

  SaturatedTBox& sat() const { return sat_; }
  const NormalizedKB& kb() const { return kb_; }

 private:
  size_t ind_index(IndId ind) const;
  static uint64_t pair_key(size_t i, size_t j) {
    return (static_cast<uint64_t>(i) << 32) | static_cast<uint64_t>(j);
  }

  SaturatedTBox& sat_;
  const NormalizedKB& kb_;
  std::unordered_map<IndId, size_t> ind_index_;
  std::vector<ConceptSet> types_;
  std::vector<NodeId> nodes_;
  bool consistent_ = true;
  // Asserted edges viewed from each ordered individual pair: r for r(a,b)
  // plus r inverted for r(b,a).
  std::unordered_map<uint64_t, std::vector<RoleExpr>> base_edges_;
  mutable std::map<std::pair<RoleId, bool>, std::vector<std::vector<IndId>>>
      adjacency_;
};

}  // namespace nrpq

#endif  // NRPQ_REASONER_HPP
