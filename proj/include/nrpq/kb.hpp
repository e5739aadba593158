// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.
//
// Knowledge-base model: concept expressions, axioms, assertions, and the
// text format used by the command-line tools.
//
// The KB language covers ELHI with bottom and its named sub-fragments.
// Concepts are built from top, bot, concept names, existential restrictions
// over (possibly inverse) roles, and conjunction. TBoxes additionally carry
// role inclusions and negative role inclusions (role disjointness).

#ifndef NRPQ_KB_HPP
#define NRPQ_KB_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nrpq/vocab.hpp"

namespace nrpq {

struct Concept;
using ConceptPtr = std::shared_ptr<const Concept>;

struct Concept {
  enum class Kind { Top, Bot, Name, Exists, And };

  Kind kind = Kind::Top;
  ConceptId name{};   // Kind::Name
  RoleExpr role{};    // Kind::Exists
  ConceptPtr lhs;     // Exists: filler; And: left conjunct
  ConceptPtr rhs;     // And: right conjunct

  static ConceptPtr top();
  static ConceptPtr bot();
  static ConceptPtr make_name(ConceptId c);
  static ConceptPtr exists(RoleExpr r, ConceptPtr filler);
  static ConceptPtr conj(ConceptPtr a, ConceptPtr b);
};

bool concept_equal(const ConceptPtr& a, const ConceptPtr& b);

struct ConceptInclusion {
  ConceptPtr sub, sup;
  bool operator==(const ConceptInclusion& o) const {
    return concept_equal(sub, o.sub) && concept_equal(sup, o.sup);
  }
};

struct RoleInclusion {
  RoleExpr sub, sup;
  bool operator==(const RoleInclusion&) const = default;
};

// r and s have an empty intersection in every model.
struct RoleDisjointness {
  RoleExpr r, s;
  bool operator==(const RoleDisjointness&) const = default;
};

struct ConceptAssertion {
  ConceptPtr c;
  IndId ind;
  bool operator==(const ConceptAssertion& o) const {
    return ind == o.ind && concept_equal(c, o.c);
  }
};

struct RoleAssertion {
  RoleId role;
  IndId from, to;
  bool operator==(const RoleAssertion&) const = default;
};

enum class Fragment {
  ELHIbot,     // full language
  ELHI,        // no bot
  ELH,         // additionally no inverse roles
  ELI,         // no role inclusions (but inverses allowed)
  EL,          // neither
  DLLiteR,     // inclusions between basic concepts only, role inclusions
  DLLiteCore,  // DL-Lite_R without role inclusions
  Plain        // assertions only, read as a finite graph
};

const char* fragment_tag(Fragment f);
Fragment fragment_from_tag(const std::string& tag);

struct TBox {
  std::vector<ConceptInclusion> concept_inclusions;
  std::vector<RoleInclusion> role_inclusions;
  std::vector<RoleDisjointness> role_disjointness;
  bool operator==(const TBox&) const = default;
};

struct ABox {
  std::vector<ConceptAssertion> concept_assertions;
  std::vector<RoleAssertion> role_assertions;
  bool operator==(const ABox&) const = default;
};

struct KB {
  Fragment fragment = Fragment::ELHIbot;
  TBox tbox;
  ABox abox;
  VocabularyPtr vocab;

  // Individuals in assertion order of first mention, duplicate-free.
  std::vector<IndId> individuals() const;
};

// Parses the text KB format:
//
//   fragment elhi-bot
//   A <= exists r.B
//   exists r-.(A & B) <= C
//   r <= s
//   r & s <= bot
//   A(a)
//   r(a, b)
//
// The header line is optional and defaults to elhi-bot. '#' starts a
// comment. Capitalization is conventional, not enforced; it only settles the
// one ambiguous statement shape, `x <= y` with bare names on both sides,
// which reads as a concept inclusion when the head is capitalized and as a
// role inclusion otherwise. Assertions are told apart by arity. A vocabulary
// may be shared across parses so that a KB and a query agree on identifiers.
KB parse_kb(const std::string& text, VocabularyPtr vocab = nullptr);

std::string print_kb(const KB& kb);

// Returns the list of violations (empty when the KB lies in the fragment).
// The check is purely syntactic, per the fragment's constructor table.
std::vector<std::string> validate_fragment(const KB& kb, Fragment f);

// Concept printing shared with diagnostics.
std::string print_concept(const Concept& c, const Vocabulary& vocab);

}  // namespace nrpq

#endif  // NRPQ_KB_HPP
