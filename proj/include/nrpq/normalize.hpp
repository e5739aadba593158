// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// TBox normal form. Every concept inclusion is decomposed into the five
// shapes below over concept names; complex ABox concept assertions are
// renamed apart. The result is a model-conservative extension of the input:
// entailments over the original signature are unchanged.

#ifndef NRPQ_NORMALIZE_HPP
#define NRPQ_NORMALIZE_HPP

#include <unordered_map>
#include <vector>

#include "nrpq/kb.hpp"

namespace nrpq {

// A <= exists r.B
struct ExistRhsAxiom {
  ConceptId a;
  RoleExpr r;
  ConceptId b;
  bool operator==(const ExistRhsAxiom&) const = default;
};

// B1 & B2 <= A (atomic inclusions are stored with B1 = B2)
struct ConjLhsAxiom {
  ConceptId b1, b2, a;
  bool operator==(const ConjLhsAxiom&) const = default;
};

// exists r.B <= A
struct ExistLhsAxiom {
  RoleExpr r;
  ConceptId b;
  ConceptId a;
  bool operator==(const ExistLhsAxiom&) const = default;
};

// What a machine-generated concept name stands for. With upper_bound set the
// registry axiom is `abbreviates <= name`, otherwise `name <= abbreviates`.
struct FreshEntry {
  ConceptPtr abbreviates;
  bool upper_bound = false;
};

struct NormalizedTBox {
  std::vector<ConceptId> bot;           // A <= bot
  std::vector<ConceptId> top;           // top <= A
  std::vector<ExistRhsAxiom> exist_rhs;
  std::vector<ConjLhsAxiom> conj_lhs;
  std::vector<ExistLhsAxiom> exist_lhs;
  std::vector<RoleInclusion> role_inclusions;
  std::vector<RoleDisjointness> role_disjointness;
  std::unordered_map<ConceptId, FreshEntry> fresh_registry;

  size_t axiom_count() const {
    return bot.size() + top.size() + exist_rhs.size() + conj_lhs.size() +
           exist_lhs.size() + role_inclusions.size() +
           role_disjointness.size();
  }
};

// Atomic concept fact A(a).
struct ConceptFact {
  ConceptId concept_name;
  IndId ind;
  bool operator==(const ConceptFact&) const = default;
};

struct NormalizedKB {
  NormalizedTBox tbox;
  std::vector<ConceptFact> concept_facts;
  std::vector<RoleAssertion> role_facts;
  // Every individual mentioned in the input ABox, in a fixed order. Kept
  // separately because top(a) assertions normalize to no fact at all.
  std::vector<IndId> individuals;
  VocabularyPtr vocab;
};

// Decomposes a KB into normal form. Fresh names use the reserved "__n"
// prefix and are recorded in the registry. Total on well-formed input.
NormalizedKB normalize(const KB& kb);

// Renders one normalized TBox in the surface axiom syntax, one axiom per
// line, in a fixed order. Used by diagnostics and the CLI.
std::string print_normalized(const NormalizedTBox& tbox,
                             const Vocabulary& vocab);

}  // namespace nrpq

#endif  // NRPQ_NORMALIZE_HPP
