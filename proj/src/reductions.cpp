// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/reductions.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nrpq/evaluator.hpp"
#include "nrpq/reasoner.hpp"

namespace nrpq {
namespace {

// One fresh concept per state, indexed by global state id.
std::vector<ConceptId> state_concepts(const NNFA& n, Vocabulary& vocab) {
  std::vector<ConceptId> names;
  names.reserve(n.num_states());
  for (StateId s = 0; s < n.num_states(); ++s) {
    (void)s;
    names.push_back(vocab.fresh_concept("st"));
  }
  return names;
}

// Appends the run-simulation axioms for every automaton of n. The name of a
// state holds wherever a run from it can reach an accepting configuration:
// final states are seeded with top inclusions and each transition becomes
// one inclusion reading the automaton backwards. When main_automaton is
// given, its seeded finals are the designated set main_finals instead of
// the automaton's own; the designated set is what the enclosing instance
// accepts with, and the two may differ.
void append_run_axioms(const NNFA& n, const std::vector<ConceptId>& names,
                       TBox& tbox, const uint32_t* main_automaton,
                       const std::vector<StateId>* main_finals) {
  for (uint32_t i = 0; i < n.automata.size(); ++i) {
    const Automaton& aut = n.automata[i];
    const std::vector<StateId>& finals =
        main_automaton != nullptr && *main_automaton == i ? *main_finals
                                                          : aut.finals;
    for (StateId f : finals) {
      tbox.concept_inclusions.push_back(
          {Concept::top(), Concept::make_name(names[f])});
    }
    for (const NNFATransition& t : aut.transitions) {
      ConceptPtr tail = Concept::make_name(names[t.to]);
      ConceptPtr head = Concept::make_name(names[t.from]);
      switch (t.label.kind) {
        case NNFALabel::Kind::Role:
          tbox.concept_inclusions.push_back(
              {Concept::exists(t.label.role, tail), head});
          break;
        case NNFALabel::Kind::ConceptTest:
          tbox.concept_inclusions.push_back(
              {Concept::conj(tail,
                             Concept::make_name(t.label.concept_name)),
               head});
          break;
        case NNFALabel::Kind::NestedTest: {
          internal_check(t.label.tests.size() == 1,
                         "companion axioms need a reduced automaton family");
          StateId init = n.automata[t.label.tests[0]].initial;
          tbox.concept_inclusions.push_back(
              {Concept::conj(tail, Concept::make_name(names[init])), head});
          break;
        }
        case NNFALabel::Kind::NominalTest:
          throw InternalError(
              "companion axioms: nominal test not eliminated");
      }
    }
  }
}

// Copies the part's automaton into a fresh single-automaton family,
// replacing each nested test by a concept test on the fresh name of the
// tested automaton's initial state. The result is a plain NFA.
NNFAPart flatten_part(const NNFAPart& part,
                      const std::vector<ConceptId>& names) {
  const NNFA& n = *part.nnfa;
  const Automaton& src = n.automata[part.automaton()];
  NNFA flat;
  flat.automata.resize(1);
  std::unordered_map<StateId, StateId> to_new;
  for (StateId s : src.states) {
    to_new.emplace(s, add_state(flat, 0, n.state_names[s]));
  }
  Automaton& dst = flat.automata[0];
  dst.initial = to_new.at(src.initial);
  for (StateId f : src.finals) dst.finals.push_back(to_new.at(f));
  for (const NNFATransition& t : src.transitions) {
    NNFALabel label = t.label;
    internal_check(label.kind != NNFALabel::Kind::NominalTest,
                   "flatten_part: nominal test not eliminated");
    if (label.kind == NNFALabel::Kind::NestedTest) {
      internal_check(label.tests.size() == 1,
                     "flatten_part needs a reduced automaton family");
      label = NNFALabel::concept_test(
          names[n.automata[label.tests[0]].initial]);
    }
    dst.transitions.push_back({to_new.at(t.from), label, to_new.at(t.to)});
  }
  validate_nnfa(flat);

  NNFAPart out;
  out.nnfa = std::make_shared<NNFA>(std::move(flat));
  out.start = to_new.at(part.start);
  for (StateId f : part.finals) out.finals.push_back(to_new.at(f));
  std::sort(out.finals.begin(), out.finals.end());
  return out;
}

// Normalizes the companion axioms and splices them into the KB's TBox. The
// axiom shapes are already normal, so this adds no helper names in
// practice, but routing through the normalizer keeps one source of truth.
void merge_companion(NormalizedKB& kb, const TBox& companion) {
  KB wrap;
  wrap.tbox = companion;
  wrap.vocab = kb.vocab;
  NormalizedKB extra = normalize(wrap);
  NormalizedTBox& t = kb.tbox;
  NormalizedTBox& s = extra.tbox;
  t.bot.insert(t.bot.end(), s.bot.begin(), s.bot.end());
  t.top.insert(t.top.end(), s.top.begin(), s.top.end());
  t.exist_rhs.insert(t.exist_rhs.end(), s.exist_rhs.begin(),
                     s.exist_rhs.end());
  t.conj_lhs.insert(t.conj_lhs.end(), s.conj_lhs.begin(), s.conj_lhs.end());
  t.exist_lhs.insert(t.exist_lhs.end(), s.exist_lhs.begin(),
                     s.exist_lhs.end());
  t.role_inclusions.insert(t.role_inclusions.end(),
                           s.role_inclusions.begin(),
                           s.role_inclusions.end());
  t.role_disjointness.insert(t.role_disjointness.end(),
                             s.role_disjointness.begin(),
                             s.role_disjointness.end());
  for (const auto& [id, entry] : s.fresh_registry) {
    t.fresh_registry.emplace(id, entry);
  }
}

}  // namespace

TranslatedQuery translate_cn2rpq(const CN2RPQ& q, Vocabulary& vocab) {
  TranslatedQuery res;
  res.query.answer_vars = q.answer_vars;
  // Parts may share one automaton family; name and axiomatize it once.
  std::unordered_map<const NNFA*, std::vector<ConceptId>> named;
  for (const QueryAtom& atom : q.atoms) {
    if (atom.kind == QueryAtom::Kind::Concept) {
      res.query.atoms.push_back(atom);
      continue;
    }
    const NNFAPtr& nnfa = atom.part.nnfa;
    internal_check(nnfa != nullptr && nnfa->reduced(),
                   "translate_cn2rpq requires reduced parts");
    auto it = named.find(nnfa.get());
    if (it == named.end()) {
      it = named.emplace(nnfa.get(), state_concepts(*nnfa, vocab)).first;
      append_run_axioms(*nnfa, it->second, res.tbox, nullptr, nullptr);
    }
    QueryAtom flat = atom;
    flat.part = flatten_part(atom.part, it->second);
    res.query.atoms.push_back(std::move(flat));
  }
  return res;
}

ReductionInstance reduce_n2rpq_to_instance(const NNFAPart& e, IndId a,
                                           IndId b, Vocabulary& vocab) {
  internal_check(e.nnfa != nullptr && e.nnfa->reduced(),
                 "reduce_n2rpq_to_instance requires a reduced part");
  const NNFA& n = *e.nnfa;

  // Wrapper automaton 0 tests the extended copy of the part's automaton;
  // every input automaton shifts up by one index.
  NNFA ext;
  ext.automata.resize(n.automata.size() + 1);
  StateId w0 = add_state(ext, 0, "w0");
  StateId w1 = add_state(ext, 0, "w1");
  uint32_t main = e.automaton() + 1;
  ext.automata[0].initial = w0;
  ext.automata[0].finals = {w1};
  ext.automata[0].transitions.push_back(
      {w0, NNFALabel::nested_test({main}), w1});

  std::unordered_map<StateId, StateId> to_new;
  for (uint32_t i = 0; i < n.automata.size(); ++i) {
    for (StateId s : n.automata[i].states) {
      to_new.emplace(s, add_state(ext, i + 1, n.state_names[s]));
    }
  }
  for (uint32_t i = 0; i < n.automata.size(); ++i) {
    const Automaton& src = n.automata[i];
    Automaton& dst = ext.automata[i + 1];
    dst.initial = to_new.at(src.initial);
    for (StateId f : src.finals) dst.finals.push_back(to_new.at(f));
    std::sort(dst.finals.begin(), dst.finals.end());
    for (const NNFATransition& t : src.transitions) {
      NNFALabel label = t.label;
      internal_check(
          label.kind != NNFALabel::Kind::NominalTest,
          "reduce_n2rpq_to_instance: nominal test not eliminated");
      if (label.kind == NNFALabel::Kind::NestedTest) {
        for (uint32_t& j : label.tests) ++j;
      }
      dst.transitions.push_back({to_new.at(t.from), label, to_new.at(t.to)});
    }
  }

  // Concatenate the marker test behind the part's designated finals and
  // retarget the copy at the part's start, so the copy accepts exactly the
  // part's runs that stop at an element carrying the marker.
  ConceptId marker = vocab.fresh_concept("mark");
  Automaton& body = ext.automata[main];
  body.initial = to_new.at(e.start);
  StateId accept = add_state(ext, main, "acc");
  for (StateId f : e.finals) {
    body.transitions.push_back(
        {to_new.at(f), NNFALabel::concept_test(marker), accept});
  }
  body.finals = {accept};
  validate_nnfa(ext);

  ReductionInstance res;
  std::vector<ConceptId> names = state_concepts(ext, vocab);
  uint32_t main_automaton = 0;
  std::vector<StateId> main_finals = {w1};
  append_run_axioms(ext, names, res.tbox, &main_automaton, &main_finals);
  res.marker = ConceptFact{marker, b};
  res.goal = ConceptFact{names[w0], a};
  return res;
}

bool answer_via_reduction(const NNFAPart& e, const NormalizedKB& kb, IndId a,
                          IndId b) {
  internal_check(kb.vocab != nullptr,
                 "answer_via_reduction: KB has no vocabulary");

  // Route the part through the query-level nominal-test elimination; parts
  // without nominal tests come back unchanged.
  CN2RPQ wrap;
  wrap.answer_vars = {"x", "y"};
  wrap.atoms.push_back(
      QueryAtom::role_atom(e, Term::make_var("x"), Term::make_var("y")));
  auto [clean, marks] = eliminate_nominal_tests(wrap, *kb.vocab);

  NormalizedKB ext = kb;
  std::vector<IndId> mentioned = {a, b};
  for (const ConceptFact& fact : marks) {
    ext.concept_facts.push_back(fact);
    mentioned.push_back(fact.ind);
  }
  ensure_individuals(ext, mentioned);

  ReductionInstance inst =
      reduce_n2rpq_to_instance(clean.atoms[0].part, a, b, *ext.vocab);
  merge_companion(ext, inst.tbox);
  ext.concept_facts.push_back(inst.marker);

  SaturatedTBox sat(ext.tbox, ext.vocab);
  KBReasoner reasoner(sat, ext);
  if (!reasoner.consistent()) {
    throw InternalError("answer_via_reduction requires a consistent KB");
  }
  return reasoner.entails_assertion(inst.goal.concept_name, inst.goal.ind);
}

}  // namespace nrpq
