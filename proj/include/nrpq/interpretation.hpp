// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Finite interpretations: a concrete domain of objects with concept-name
// labels and role edges. Inverse roles are derived from the direct edge set,
// never stored. Used for plain-graph evaluation and for depth-bounded
// materializations of canonical models.

#ifndef NRPQ_INTERPRETATION_HPP
#define NRPQ_INTERPRETATION_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nrpq/kb.hpp"

namespace nrpq {

using ObjId = uint32_t;

class FiniteInterpretation {
 public:
  struct Edge {
    RoleId role;
    ObjId from, to;
    bool operator==(const Edge&) const = default;
  };

  explicit FiniteInterpretation(VocabularyPtr vocab);

  // Adds an object. If the preferred name is taken, a numeric suffix is
  // appended until the name is unique.
  ObjId add_object(const std::string& preferred_name);

  // Binds a named individual to an existing object.
  void bind_individual(IndId ind, ObjId o);

  void add_label(ObjId o, ConceptId a);

  // Records (from, to) in the direct extension of the underlying role name;
  // an inverted expression stores the flipped pair.
  void add_edge(RoleExpr r, ObjId from, ObjId to);

  size_t size() const { return names_.size(); }
  const std::string& object_name(ObjId o) const { return names_[o]; }
  bool has_label(ObjId o, ConceptId a) const;
  const ConceptSet& labels(ObjId o) const { return labels_[o]; }

  // Objects reachable from o by one r-edge (inverse expressions walk the
  // stored edges backwards). Sorted, duplicate-free.
  const std::vector<ObjId>& successors(ObjId o, RoleExpr r) const;

  // All (from, to) pairs in the extension of r, sorted, duplicate-free.
  std::vector<std::pair<ObjId, ObjId>> edge_set(RoleExpr r) const;

  const std::vector<Edge>& edges() const { return edges_; }

  // The object a named individual is bound to, or nullptr.
  const ObjId* find_individual(IndId ind) const;

  const std::unordered_map<IndId, ObjId>& individual_map() const {
    return ind_map_;
  }

  const Vocabulary& vocab() const { return *vocab_; }
  const VocabularyPtr& vocab_ptr() const { return vocab_; }

  // Serializes in the plain-graph format: one `Name(a)` line per label and
  // one `role(a, b)` line per direct edge, in insertion order.
  std::string to_plain_text() const;

 private:
  VocabularyPtr vocab_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, ObjId> by_name_;
  std::vector<ConceptSet> labels_;
  // Direct adjacency per role name: fwd_[r][o] and bwd_[r][o].
  std::unordered_map<RoleId, std::vector<std::vector<ObjId>>> fwd_;
  std::unordered_map<RoleId, std::vector<std::vector<ObjId>>> bwd_;
  std::vector<Edge> edges_;
  std::unordered_map<IndId, ObjId> ind_map_;
  std::vector<ObjId> no_succ_;
};

// Reads an assertions-only KB as a closed-world finite interpretation.
// Objects are the individuals; labels come from concept-name assertions.
// Rejects input with TBox axioms or complex assertion heads.
FiniteInterpretation from_plain_kb(const KB& kb);

}  // namespace nrpq

#endif  // NRPQ_INTERPRETATION_HPP
