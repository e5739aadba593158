// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Nested regular expressions over roles, inverse roles, concept tests A?,
// nominal tests {a}?, and existential tests <E>; parsing, printing, and
// compilation into nested NFAs.

#ifndef NRPQ_NRE_HPP
#define NRPQ_NRE_HPP

#include <memory>
#include <string>

#include "nrpq/nnfa.hpp"

namespace nrpq {

struct NRE;
using NREPtr = std::shared_ptr<const NRE>;

struct NRE {
  enum class Kind {
    Role,         // r or r-
    ConceptTest,  // A?
    NominalTest,  // {a}?
    Concat,       // lhs . rhs
    Union,        // lhs | rhs
    Star,         // lhs*
    Test          // <lhs>
  };

  Kind kind = Kind::Role;
  RoleExpr role{RoleId{0}, false};
  ConceptId concept_name{0};
  IndId individual{0};
  NREPtr lhs, rhs;

  static NREPtr make_role(RoleExpr r);
  static NREPtr concept_test(ConceptId a);
  static NREPtr nominal_test(IndId a);
  static NREPtr concat(NREPtr l, NREPtr r);
  static NREPtr alternative(NREPtr l, NREPtr r);
  static NREPtr star(NREPtr e);
  static NREPtr test(NREPtr e);
};

// Grammar: alt := seq ('|' seq)*; seq := star ('.' star)*;
// star := base '*'?; base := ROLE | ROLE '-' | NAME '?' | '{' IND '}' '?'
// | '<' nre '>' | '(' nre ')'. Star binds tightest, then concatenation,
// then union.
NREPtr parse_nre(const std::string& text, Vocabulary& vocab);

// Parses the longest expression starting at text[pos] and advances pos past
// it. Used by the query parser, which embeds expressions in a larger file.
NREPtr parse_nre_prefix(const std::string& text, size_t& pos,
                        Vocabulary& vocab);

std::string print_nre(const NRE& e, const Vocabulary& vocab);

// Thompson construction followed by epsilon elimination and a reachability
// trim. Each <E'> subtree becomes its own automaton; automata are indexed
// in discovery pre-order, which satisfies the l < j reference constraint.
// The output contains no epsilon transitions and is reduced.
NNFAPart compile_nre(const NRE& e, const Vocabulary& vocab);

// The reverse direction, by state elimination; nested tests become nested
// <E'> subexpressions, a multi-index test a concatenation of tests. The
// start state must not be final and at least one final state must be
// reachable, since expressions cannot denote the empty run or the empty
// language; either case throws InternalError. Parallel edges are folded
// into balanced unions, so the expression depth stays logarithmic.
NREPtr nnfa_to_nre(const NNFAPart& part);

}  // namespace nrpq

#endif  // NRPQ_NRE_HPP
