// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/reasoner.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace nrpq {

namespace {

void note_concept(std::set<ConceptId>& names, ConceptId a) { names.insert(a); }

void note_role(std::set<RoleId>& roles, RoleExpr r) { roles.insert(r.name); }

}  // namespace

SaturatedTBox::SaturatedTBox(const NormalizedTBox& tbox, VocabularyPtr vocab)
    : tbox_(tbox), vocab_(std::move(vocab)) {
  std::set<ConceptId> names;
  std::set<RoleId> roles;
  for (ConceptId a : tbox_.bot) note_concept(names, a);
  for (ConceptId a : tbox_.top) note_concept(names, a);
  for (const ExistRhsAxiom& ax : tbox_.exist_rhs) {
    note_concept(names, ax.a);
    note_concept(names, ax.b);
    note_role(roles, ax.r);
  }
  for (const ConjLhsAxiom& ax : tbox_.conj_lhs) {
    note_concept(names, ax.b1);
    note_concept(names, ax.b2);
    note_concept(names, ax.a);
  }
  for (const ExistLhsAxiom& ax : tbox_.exist_lhs) {
    note_concept(names, ax.b);
    note_concept(names, ax.a);
    note_role(roles, ax.r);
  }
  for (const RoleInclusion& ri : tbox_.role_inclusions) {
    note_role(roles, ri.sub);
    note_role(roles, ri.sup);
  }
  for (const RoleDisjointness& rd : tbox_.role_disjointness) {
    note_role(roles, rd.r);
    note_role(roles, rd.s);
  }
  names_.assign(names.begin(), names.end());

  size_t idx = 0;
  for (RoleId r : roles) {
    role_index_.emplace(r, idx++);
    role_exprs_.push_back(RoleExpr{r, false});
    role_exprs_.push_back(RoleExpr{r, true});
  }
  size_t dim = 2 * role_index_.size();
  role_closure_.assign(dim, std::vector<bool>(dim, false));
  auto slot = [&](RoleExpr r) {
    return 2 * role_index_.at(r.name) + (r.inverted ? 1 : 0);
  };
  for (size_t i = 0; i < dim; ++i) role_closure_[i][i] = true;
  for (const RoleInclusion& ri : tbox_.role_inclusions) {
    role_closure_[slot(ri.sub)][slot(ri.sup)] = true;
    role_closure_[slot(ri.sub.inverse())][slot(ri.sup.inverse())] = true;
  }
  for (size_t k = 0; k < dim; ++k) {
    for (size_t i = 0; i < dim; ++i) {
      if (!role_closure_[i][k]) continue;
      for (size_t j = 0; j < dim; ++j) {
        if (role_closure_[k][j]) role_closure_[i][j] = true;
      }
    }
  }
}

bool SaturatedTBox::role_sub(RoleExpr sub, RoleExpr sup) const {
  if (sub == sup) return true;
  auto si = role_index_.find(sub.name);
  auto pi = role_index_.find(sup.name);
  if (si == role_index_.end() || pi == role_index_.end()) return false;
  return role_closure_[2 * si->second + (sub.inverted ? 1 : 0)]
                      [2 * pi->second + (sup.inverted ? 1 : 0)];
}

std::vector<RoleExpr> SaturatedTBox::role_supers(RoleExpr r) const {
  std::vector<RoleExpr> out;
  auto it = role_index_.find(r.name);
  if (it == role_index_.end()) {
    out.push_back(r);
    return out;
  }
  size_t row = 2 * it->second + (r.inverted ? 1 : 0);
  for (size_t j = 0; j < role_closure_.size(); ++j) {
    if (role_closure_[row][j]) out.push_back(role_exprs_[j]);
  }
  return out;
}

bool SaturatedTBox::roles_disjoint(RoleExpr p, RoleExpr q) const {
  for (const RoleDisjointness& rd : tbox_.role_disjointness) {
    RoleExpr s = rd.r, t = rd.s;
    if ((role_sub(p, s) && role_sub(q, t)) ||
        (role_sub(p, t) && role_sub(q, s)) ||
        (role_sub(p.inverse(), s) && role_sub(q.inverse(), t)) ||
        (role_sub(p.inverse(), t) && role_sub(q.inverse(), s))) {
      return true;
    }
  }
  return false;
}

NodeId SaturatedTBox::lookup_or_create(ConceptSet members) {
  auto it = node_index_.find(members);
  if (it != node_index_.end()) return it->second;
  NodeId id = static_cast<NodeId>(nodes_.size());
  Node node;
  node.members = members;
  node.supers = members;  // R0
  nodes_.push_back(std::move(node));
  node_index_.emplace(std::move(members), id);
  return id;
}

NodeId SaturatedTBox::register_conjunction(ConceptSet members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  size_t before = nodes_.size();
  NodeId id = lookup_or_create(std::move(members));
  if (nodes_.size() != before && !saturating_) saturate();
  return id;
}

void SaturatedTBox::saturate() {
  saturating_ = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId n = 0; n < nodes_.size(); ++n) {
      if (apply_rules(n)) changed = true;
    }
  }
  saturating_ = false;
}

ConceptSet SaturatedTBox::widen(NodeId parent, RoleExpr r,
                                ConceptId seed) const {
  ConceptSet out{seed};
  for (const ExistLhsAxiom& ax : tbox_.exist_lhs) {
    if (role_sub(r.inverse(), ax.r) &&
        set_contains(nodes_[parent].supers, ax.b)) {
      set_insert(out, ax.a);
    }
  }
  return out;
}

bool SaturatedTBox::apply_rules(NodeId n) {
  bool changed = false;
  auto add_super = [&](ConceptId a) {
    if (set_insert(nodes_[n].supers, a)) changed = true;
  };
  for (ConceptId a : tbox_.top) add_super(a);
  for (const ConjLhsAxiom& ax : tbox_.conj_lhs) {
    if (set_contains(nodes_[n].supers, ax.b1) &&
        set_contains(nodes_[n].supers, ax.b2)) {
      add_super(ax.a);
    }
  }
  for (ConceptId a : tbox_.bot) {
    if (set_contains(nodes_[n].supers, a) && !nodes_[n].bot) {
      nodes_[n].bot = true;
      changed = true;
    }
  }
  for (size_t i = 0; i < tbox_.exist_rhs.size(); ++i) {
    const ExistRhsAxiom& ax = tbox_.exist_rhs[i];
    if (!set_contains(nodes_[n].supers, ax.a)) continue;
    ConceptSet widened = widen(n, ax.r, ax.b);
    auto fired = nodes_[n].fired.find(i);
    if (fired == nodes_[n].fired.end() ||
        nodes_[fired->second].members != widened) {
      NodeId target = lookup_or_create(std::move(widened));
      nodes_[n].fired[i] = target;
      changed = true;
    }
    NodeId target = nodes_[n].fired.at(i);
    if (!nodes_[n].bot &&
        (nodes_[target].bot || roles_disjoint(ax.r, ax.r))) {
      nodes_[n].bot = true;
      changed = true;
    }
    for (const ExistLhsAxiom& lhs : tbox_.exist_lhs) {
      if (role_sub(ax.r, lhs.r) &&
          set_contains(nodes_[target].supers, lhs.b)) {
        add_super(lhs.a);
      }
    }
  }
  return changed;
}

bool SaturatedTBox::entails_subsumption(const ConceptSet& c,
                                        const ConceptSet& d) {
  NodeId n = register_conjunction(c);
  if (nodes_[n].bot) return true;
  return set_includes(nodes_[n].supers, d);
}

std::vector<SaturatedTBox::Existential> SaturatedTBox::existentials(
    NodeId n) const {
  std::vector<Existential> out;
  std::set<std::pair<uint64_t, NodeId>> seen;
  for (const auto& [axiom_idx, target] : nodes_[n].fired) {
    const ExistRhsAxiom& ax = tbox_.exist_rhs[axiom_idx];
    if (seen.emplace(ax.r.key(), target).second) {
      out.push_back(Existential{ax.r, ax.b, target});
    }
  }
  return out;
}

KBReasoner::KBReasoner(SaturatedTBox& sat, const NormalizedKB& kb)
    : sat_(sat), kb_(kb) {
  const auto& inds = kb_.individuals;
  for (size_t i = 0; i < inds.size(); ++i) ind_index_.emplace(inds[i], i);
  types_.assign(inds.size(), ConceptSet{});
  nodes_.assign(inds.size(), 0);
  for (const ConceptFact& cf : kb_.concept_facts) {
    set_insert(types_[ind_index(cf.ind)], cf.concept_name);
  }
  for (const RoleAssertion& ra : kb_.role_facts) {
    size_t from = ind_index(ra.from), to = ind_index(ra.to);
    base_edges_[pair_key(from, to)].push_back(RoleExpr{ra.role, false});
    base_edges_[pair_key(to, from)].push_back(RoleExpr{ra.role, true});
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < inds.size(); ++i) {
      NodeId n = sat_.register_conjunction(types_[i]);
      nodes_[i] = n;
      const ConceptSet& sup = sat_.supers(n);
      if (types_[i] != sup) {
        types_[i] = sup;
        changed = true;
      }
    }
    for (const RoleAssertion& ra : kb_.role_facts) {
      size_t from = ind_index(ra.from), to = ind_index(ra.to);
      RoleExpr r{ra.role, false};
      for (const ExistLhsAxiom& ax : sat_.source().exist_lhs) {
        if (sat_.role_sub(r, ax.r) && set_contains(types_[to], ax.b) &&
            set_insert(types_[from], ax.a)) {
          changed = true;
        }
        if (sat_.role_sub(r.inverse(), ax.r) &&
            set_contains(types_[from], ax.b) &&
            set_insert(types_[to], ax.a)) {
          changed = true;
        }
      }
    }
  }

  for (size_t i = 0; i < inds.size() && consistent_; ++i) {
    if (sat_.inconsistent(nodes_[i])) consistent_ = false;
  }
  if (consistent_ && !sat_.source().role_disjointness.empty()) {
    for (const auto& [key, exprs] : base_edges_) {
      for (RoleExpr p : exprs) {
        for (RoleExpr q : exprs) {
          if (sat_.roles_disjoint(p, q)) {
            consistent_ = false;
            break;
          }
        }
        if (!consistent_) break;
      }
      if (!consistent_) break;
    }
  }
}

size_t KBReasoner::ind_index(IndId ind) const {
  auto it = ind_index_.find(ind);
  if (it == ind_index_.end()) {
    throw InternalError("individual not present in the knowledge base: " +
                        sat_.vocab().ind_name(ind));
  }
  return it->second;
}

bool KBReasoner::entails_assertion(ConceptId a, IndId ind) const {
  if (!consistent_) {
    throw InternalError(
        "entails_assertion requires a consistent knowledge base");
  }
  return set_contains(types_[ind_index(ind)], a);
}

const ConceptSet& KBReasoner::ind_type(IndId ind) const {
  return types_[ind_index(ind)];
}

NodeId KBReasoner::ind_node(IndId ind) const {
  return nodes_[ind_index(ind)];
}

bool KBReasoner::entailed_role_edge(RoleExpr r, IndId a, IndId b) const {
  auto it = base_edges_.find(pair_key(ind_index(a), ind_index(b)));
  if (it == base_edges_.end()) return false;
  for (RoleExpr q : it->second) {
    if (sat_.role_sub(q, r)) return true;
  }
  return false;
}

const std::vector<IndId>& KBReasoner::role_successors(RoleExpr r,
                                                      IndId a) const {
  auto key = std::make_pair(r.name, r.inverted);
  auto it = adjacency_.find(key);
  if (it == adjacency_.end()) {
    std::vector<std::vector<IndId>> adj(kb_.individuals.size());
    for (const RoleAssertion& ra : kb_.role_facts) {
      RoleExpr q{ra.role, false};
      if (sat_.role_sub(q, r)) {
        adj[ind_index(ra.from)].push_back(ra.to);
      }
      if (sat_.role_sub(q.inverse(), r)) {
        adj[ind_index(ra.to)].push_back(ra.from);
      }
    }
    for (auto& vec : adj) {
      std::sort(vec.begin(), vec.end());
      vec.erase(std::unique(vec.begin(), vec.end()), vec.end());
    }
    it = adjacency_.emplace(key, std::move(adj)).first;
  }
  return it->second[ind_index(a)];
}

FiniteInterpretation KBReasoner::materialize(int depth) const {
  if (!consistent_) {
    throw InternalError(
        "materialization requires a consistent knowledge base");
  }
  FiniteInterpretation out(sat_.vocab_ptr());
  const auto& inds = kb_.individuals;
  std::vector<ObjId> objs(inds.size());
  for (size_t i = 0; i < inds.size(); ++i) {
    objs[i] = out.add_object(sat_.vocab().ind_name(inds[i]));
    out.bind_individual(inds[i], objs[i]);
    for (ConceptId a : types_[i]) out.add_label(objs[i], a);
  }
  for (const RoleAssertion& ra : kb_.role_facts) {
    ObjId from = objs[ind_index(ra.from)], to = objs[ind_index(ra.to)];
    for (RoleExpr s : sat_.role_supers(RoleExpr{ra.role, false})) {
      out.add_edge(s, from, to);
    }
  }

  struct PendingElement {
    ObjId obj;
    NodeId node;
    int level;
  };
  std::deque<PendingElement> queue;
  for (size_t i = 0; i < inds.size(); ++i) {
    queue.push_back(PendingElement{objs[i], nodes_[i], 0});
  }
  while (!queue.empty()) {
    PendingElement cur = queue.front();
    queue.pop_front();
    if (cur.level >= depth) continue;
    for (const SaturatedTBox::Existential& ex : sat_.existentials(cur.node)) {
      std::string role_token = sat_.vocab().role_name(ex.role.name);
      if (ex.role.inverted) role_token += "i";
      ObjId child = out.add_object(out.object_name(cur.obj) + "__" +
                                   role_token + "_" +
                                   sat_.vocab().concept_name(ex.seed));
      for (ConceptId a : sat_.supers(ex.target)) out.add_label(child, a);
      for (RoleExpr s : sat_.role_supers(ex.role)) {
        out.add_edge(s, cur.obj, child);
      }
      queue.push_back(PendingElement{child, ex.target, cur.level + 1});
    }
  }
  return out;
}

}  // namespace nrpq
