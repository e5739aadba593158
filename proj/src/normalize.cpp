// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/normalize.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>

namespace nrpq {

namespace {

struct Normalizer {
  Vocabulary& vocab;
  NormalizedTBox& out;
  // Memo tables keyed by the printed concept so that structurally equal
  // occurrences share one fresh name per polarity.
  std::map<std::string, ConceptId> lower_names;  // X <= C holds
  std::map<std::string, ConceptId> upper_names;  // C <= X holds

  Normalizer(Vocabulary& v, NormalizedTBox& o) : vocab(v), out(o) {}

  ConceptId fresh_for(const ConceptPtr& c, bool upper_bound) {
    ConceptId x = vocab.fresh_concept("n");
    out.fresh_registry.emplace(x, FreshEntry{c, upper_bound});
    return x;
  }

  // Flattens nested conjunctions into their atomic conjuncts, dropping top.
  // Returns false when a bot conjunct makes the whole conjunction empty.
  bool flatten_conj(const ConceptPtr& c, std::vector<ConceptPtr>& atoms) {
    switch (c->kind) {
      case Concept::Kind::And:
        return flatten_conj(c->lhs, atoms) && flatten_conj(c->rhs, atoms);
      case Concept::Kind::Top:
        return true;
      case Concept::Kind::Bot:
        return false;
      default:
        atoms.push_back(c);
        return true;
    }
  }

  // A name X that behaves like C on the left of an inclusion: C <= X holds.
  ConceptId name_for_lhs(const ConceptPtr& c) {
    switch (c->kind) {
      case Concept::Kind::Name:
        return c->name;
      case Concept::Kind::Top: {
        std::string key = "top";
        auto it = upper_names.find(key);
        if (it != upper_names.end()) return it->second;
        ConceptId x = fresh_for(c, true);
        upper_names.emplace(key, x);
        out.top.push_back(x);
        return x;
      }
      default: {
        std::string key = print_concept(*c, vocab);
        auto it = upper_names.find(key);
        if (it != upper_names.end()) return it->second;
        ConceptId x = fresh_for(c, true);
        upper_names.emplace(key, x);
        add_inclusion(c, Concept::make_name(x));
        return x;
      }
    }
  }

  // A name X that behaves like C on the right of an inclusion: X <= C holds.
  ConceptId name_for_rhs(const ConceptPtr& c) {
    switch (c->kind) {
      case Concept::Kind::Name:
        return c->name;
      case Concept::Kind::Top:
        // Reuse the left-hand top alias; top <= X makes X <= top an
        // equivalence, so it serves both polarities.
        return name_for_lhs(c);
      default: {
        std::string key =
            c->kind == Concept::Kind::Bot ? "bot" : print_concept(*c, vocab);
        auto it = lower_names.find(key);
        if (it != lower_names.end()) return it->second;
        ConceptId x = fresh_for(c, false);
        lower_names.emplace(key, x);
        add_inclusion(Concept::make_name(x), c);
        return x;
      }
    }
  }

  void emit_names_leq_name(std::vector<ConceptId> lhs, ConceptId rhs) {
    if (lhs.empty()) {
      out.top.push_back(rhs);
      return;
    }
    // Chain conjunctions pairwise; a singleton uses the padded atomic shape.
    while (lhs.size() > 2) {
      ConceptId b2 = lhs.back();
      lhs.pop_back();
      ConceptId b1 = lhs.back();
      lhs.pop_back();
      ConceptPtr abbreviated = Concept::conj(Concept::make_name(b1),
                                             Concept::make_name(b2));
      ConceptId y = fresh_for(abbreviated, true);
      out.conj_lhs.push_back({b1, b2, y});
      lhs.push_back(y);
    }
    if (lhs.size() == 1)
      out.conj_lhs.push_back({lhs[0], lhs[0], rhs});
    else
      out.conj_lhs.push_back({lhs[0], lhs[1], rhs});
  }

  void add_inclusion(const ConceptPtr& sub, const ConceptPtr& sup) {
    switch (sup->kind) {
      case Concept::Kind::Top:
        return;  // trivially true
      case Concept::Kind::And:
        add_inclusion(sub, sup->lhs);
        add_inclusion(sub, sup->rhs);
        return;
      case Concept::Kind::Bot:
        out.bot.push_back(name_for_lhs(sub));
        return;
      case Concept::Kind::Exists: {
        ConceptId a = name_for_lhs(sub);
        ConceptId b = name_for_rhs(sup->lhs);
        out.exist_rhs.push_back({a, sup->role, b});
        return;
      }
      case Concept::Kind::Name:
        break;
    }
    // Named right side: decompose the left side.
    ConceptId a = sup->name;
    switch (sub->kind) {
      case Concept::Kind::Bot:
        return;  // trivially true
      case Concept::Kind::Top:
        out.top.push_back(a);
        return;
      case Concept::Kind::Name:
        out.conj_lhs.push_back({sub->name, sub->name, a});
        return;
      case Concept::Kind::Exists: {
        ConceptId b = name_for_lhs(sub->lhs);
        out.exist_lhs.push_back({sub->role, b, a});
        return;
      }
      case Concept::Kind::And: {
        std::vector<ConceptPtr> atoms;
        if (!flatten_conj(sub, atoms)) return;  // bot conjunct
        std::vector<ConceptId> names;
        names.reserve(atoms.size());
        for (const ConceptPtr& atom : atoms)
          names.push_back(atom->kind == Concept::Kind::Name
                              ? atom->name
                              : name_for_lhs(atom));
        emit_names_leq_name(std::move(names), a);
        return;
      }
    }
  }
};

}  // namespace

NormalizedKB normalize(const KB& kb) {
  NormalizedKB nkb;
  nkb.vocab = kb.vocab;
  Normalizer n(*kb.vocab, nkb.tbox);

  for (const auto& ci : kb.tbox.concept_inclusions)
    n.add_inclusion(ci.sub, ci.sup);
  nkb.tbox.role_inclusions = kb.tbox.role_inclusions;
  nkb.tbox.role_disjointness = kb.tbox.role_disjointness;

  nkb.individuals = kb.individuals();
  for (const auto& ca : kb.abox.concept_assertions) {
    if (ca.c->kind == Concept::Kind::Top) continue;  // tautology
    if (ca.c->kind == Concept::Kind::Name) {
      nkb.concept_facts.push_back({ca.c->name, ca.ind});
      continue;
    }
    nkb.concept_facts.push_back({n.name_for_rhs(ca.c), ca.ind});
  }
  nkb.role_facts = kb.abox.role_assertions;
  return nkb;
}

std::string print_normalized(const NormalizedTBox& tbox,
                             const Vocabulary& vocab) {
  std::ostringstream out;
  for (ConceptId a : tbox.bot) out << vocab.concept_name(a) << " <= bot\n";
  for (ConceptId a : tbox.top) out << "top <= " << vocab.concept_name(a) << "\n";
  for (const auto& ax : tbox.exist_rhs)
    out << vocab.concept_name(ax.a) << " <= exists "
        << vocab.role_expr_name(ax.r) << "." << vocab.concept_name(ax.b)
        << "\n";
  for (const auto& ax : tbox.conj_lhs)
    out << vocab.concept_name(ax.b1) << " & " << vocab.concept_name(ax.b2)
        << " <= " << vocab.concept_name(ax.a) << "\n";
  for (const auto& ax : tbox.exist_lhs)
    out << "exists " << vocab.role_expr_name(ax.r) << "."
        << vocab.concept_name(ax.b) << " <= " << vocab.concept_name(ax.a)
        << "\n";
  for (const auto& ri : tbox.role_inclusions)
    out << vocab.role_expr_name(ri.sub) << " <= "
        << vocab.role_expr_name(ri.sup) << "\n";
  for (const auto& rd : tbox.role_disjointness)
    out << vocab.role_expr_name(rd.r) << " & " << vocab.role_expr_name(rd.s)
        << " <= bot\n";
  return out.str();
}

}  // namespace nrpq
