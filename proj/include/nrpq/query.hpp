// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Conjunctive nested two-way regular path queries: terms, atoms, the query
// type, parsing, printing, and nominal-test elimination.

#ifndef NRPQ_QUERY_HPP
#define NRPQ_QUERY_HPP

#include <string>
#include <utility>
#include <vector>

#include "nrpq/nnfa.hpp"
#include "nrpq/normalize.hpp"
#include "nrpq/nre.hpp"

namespace nrpq {

struct Term {
  enum class Kind { Var, Ind };

  Kind kind = Kind::Var;
  std::string var;
  IndId ind{0};

  bool is_var() const { return kind == Kind::Var; }
  bool is_ind() const { return kind == Kind::Ind; }

  static Term make_var(std::string name);
  static Term make_ind(IndId a);

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct QueryAtom {
  enum class Kind { Concept, Role, ExistTest };

  Kind kind = Kind::Concept;
  ConceptId concept_name{0};  // Concept atoms only.
  NNFAPart part;              // Role and ExistTest atoms only.
  Term from;                  // The sole term of Concept and ExistTest atoms.
  Term to;                    // Role atoms only.

  static QueryAtom concept_atom(ConceptId a, Term t);
  static QueryAtom role_atom(NNFAPart part, Term t1, Term t2);
  // Semantically equivalent to a role atom into a variable that occurs
  // nowhere else; produced by the rewriter, never by the parser.
  static QueryAtom exist_test_atom(NNFAPart part, Term t);

  std::vector<Term> terms() const;
};

struct CN2RPQ {
  std::vector<std::string> answer_vars;
  std::vector<QueryAtom> atoms;

  bool boolean() const { return answer_vars.empty(); }
};

// Format: `q(x1,...,xk) <- atom, atom, ...` where atom is `NAME(term)` or
// `NRE(term, term)`; '#' starts a comment. Terms are variables; individuals
// enter queries only through nominal tests {a}?. Every answer variable must
// occur in the body. Expressions are compiled through compile_nre and
// reduce_nnfa, so every part references a reduced automaton.
CN2RPQ parse_query(const std::string& text, Vocabulary& vocab);

std::string print_query(const CN2RPQ& q, const Vocabulary& vocab);
std::string print_term(const Term& t, const Vocabulary& vocab);
std::string print_atom(const QueryAtom& atom, const Vocabulary& vocab);

// All variable names in the query, sorted; answer variables included.
std::vector<std::string> query_vars(const CN2RPQ& q);
// Variables that are not answer variables, sorted.
std::vector<std::string> existential_vars(const CN2RPQ& q);
// All terms in the query body, sorted and deduplicated.
std::vector<Term> query_terms(const CN2RPQ& q);

// Replaces every {a}? transition by a fresh concept test and returns the
// assertions that make the fresh names true exactly at their individuals.
// One fresh name per individual, shared across tests and atoms.
std::pair<CN2RPQ, std::vector<ConceptFact>> eliminate_nominal_tests(
    const CN2RPQ& q, Vocabulary& vocab);

}  // namespace nrpq

#endif  // NRPQ_QUERY_HPP
