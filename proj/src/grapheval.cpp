// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/grapheval.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <tuple>

namespace nrpq {

namespace {

// Pair sets for all parts over one interpretation, memoized. Nested-test
// satisfaction per automaton is computed once per NNFA in decreasing index
// order, so every referenced automaton is settled before its referrer.
struct PairMemo {
  const FiniteInterpretation& interp;
  std::map<std::tuple<const NNFA*, StateId, std::vector<StateId>>,
           std::set<ObjPair>>
      parts;
  std::map<const NNFA*, std::vector<std::vector<bool>>> sat;

  std::set<ObjPair> pairs_raw(const NNFA& n, uint32_t aut, StateId start,
                              const std::vector<StateId>& finals,
                              const std::vector<std::vector<bool>>& sat_by) {
    const Automaton& a = n.automata[aut];
    const std::vector<StateId>& states = a.states;
    size_t num_states = states.size();
    auto local = [&](StateId s) {
      return static_cast<size_t>(
          std::lower_bound(states.begin(), states.end(), s) - states.begin());
    };
    std::vector<std::vector<const NNFATransition*>> out_of(num_states);
    for (const NNFATransition& t : a.transitions) {
      out_of[local(t.from)].push_back(&t);
    }
    std::vector<bool> is_final(num_states, false);
    for (StateId f : finals) is_final[local(f)] = true;

    size_t num_objects = interp.size();
    std::set<ObjPair> result;
    std::vector<bool> seen(num_objects * num_states);
    for (ObjId o = 0; o < num_objects; ++o) {
      std::fill(seen.begin(), seen.end(), false);
      std::deque<std::pair<ObjId, size_t>> queue;
      auto push = [&](ObjId c, size_t ls) {
        if (!seen[c * num_states + ls]) {
          seen[c * num_states + ls] = true;
          queue.emplace_back(c, ls);
        }
      };
      push(o, local(start));
      while (!queue.empty()) {
        auto [c, ls] = queue.front();
        queue.pop_front();
        if (is_final[ls]) result.emplace(o, c);
        for (const NNFATransition* t : out_of[ls]) {
          size_t lt = local(t->to);
          switch (t->label.kind) {
            case NNFALabel::Kind::Role:
              for (ObjId d : interp.successors(c, t->label.role)) {
                push(d, lt);
              }
              break;
            case NNFALabel::Kind::ConceptTest:
              if (interp.has_label(c, t->label.concept_name)) push(c, lt);
              break;
            case NNFALabel::Kind::NominalTest: {
              const ObjId* b = interp.find_individual(t->label.individual);
              if (b != nullptr && *b == c) push(c, lt);
              break;
            }
            case NNFALabel::Kind::NestedTest: {
              bool ok = true;
              for (uint32_t j : t->label.tests) ok = ok && sat_by[j][c];
              if (ok) push(c, lt);
              break;
            }
          }
        }
      }
    }
    return result;
  }

  const std::vector<std::vector<bool>>& sat_for(const NNFAPtr& n) {
    auto it = sat.find(n.get());
    if (it != sat.end()) return it->second;
    std::vector<std::vector<bool>> by(n->automata.size());
    for (size_t j = n->automata.size(); j-- > 0;) {
      const Automaton& a = n->automata[j];
      std::set<ObjPair> p = pairs_raw(*n, static_cast<uint32_t>(j), a.initial,
                                      a.finals, by);
      by[j].assign(interp.size(), false);
      for (const ObjPair& pr : p) by[j][pr.first] = true;
    }
    return sat.emplace(n.get(), std::move(by)).first->second;
  }

  const std::set<ObjPair>& pairs(const NNFAPart& part) {
    auto key = std::make_tuple(part.nnfa.get(), part.start, part.finals);
    auto it = parts.find(key);
    if (it != parts.end()) return it->second;
    std::set<ObjPair> p = pairs_raw(*part.nnfa, part.automaton(), part.start,
                                    part.finals, sat_for(part.nnfa));
    return parts.emplace(std::move(key), std::move(p)).first->second;
  }
};

}  // namespace

std::set<ObjPair> eval_on_interpretation(const NNFAPart& part,
                                         const FiniteInterpretation& i) {
  PairMemo memo{i, {}, {}};
  return memo.pairs(part);
}

std::set<std::vector<ObjId>> answers_on_interpretation(
    const CN2RPQ& q, const FiniteInterpretation& i) {
  PairMemo memo{i, {}, {}};
  std::set<std::vector<ObjId>> out;
  std::map<std::string, ObjId> bound;

  // 1 = resolved into o, 0 = unbound variable, -1 = individual absent.
  auto resolve = [&](const Term& t, ObjId& o) {
    if (t.is_ind()) {
      const ObjId* p = i.find_individual(t.ind);
      if (p == nullptr) return -1;
      o = *p;
      return 1;
    }
    auto it = bound.find(t.var);
    if (it == bound.end()) return 0;
    o = it->second;
    return 1;
  };

  std::vector<ObjId> tuple;
  std::function<void(size_t)> emit = [&](size_t k) {
    if (k == q.answer_vars.size()) {
      out.insert(tuple);
      return;
    }
    auto it = bound.find(q.answer_vars[k]);
    if (it != bound.end()) {
      tuple.push_back(it->second);
      emit(k + 1);
      tuple.pop_back();
      return;
    }
    // An answer variable missing from the body ranges over all objects.
    for (ObjId o = 0; o < i.size(); ++o) {
      tuple.push_back(o);
      emit(k + 1);
      tuple.pop_back();
    }
  };

  std::function<void(size_t)> go = [&](size_t idx) {
    if (idx == q.atoms.size()) {
      emit(0);
      return;
    }
    const QueryAtom& atom = q.atoms[idx];
    switch (atom.kind) {
      case QueryAtom::Kind::Concept: {
        ObjId o = 0;
        int r = resolve(atom.from, o);
        if (r == -1) return;
        if (r == 1) {
          if (i.has_label(o, atom.concept_name)) go(idx + 1);
          return;
        }
        for (ObjId c = 0; c < i.size(); ++c) {
          if (!i.has_label(c, atom.concept_name)) continue;
          bound[atom.from.var] = c;
          go(idx + 1);
          bound.erase(atom.from.var);
        }
        return;
      }
      case QueryAtom::Kind::Role: {
        ObjId o1 = 0, o2 = 0;
        int r1 = resolve(atom.from, o1);
        int r2 = resolve(atom.to, o2);
        if (r1 == -1 || r2 == -1) return;
        bool same_unbound_var = r1 == 0 && r2 == 0 && atom.from.is_var() &&
                                atom.to.is_var() &&
                                atom.from.var == atom.to.var;
        const std::set<ObjPair>& pairs = memo.pairs(atom.part);
        for (const auto& [a, b] : pairs) {
          if (r1 == 1 && a != o1) continue;
          if (r2 == 1 && b != o2) continue;
          if (same_unbound_var && a != b) continue;
          if (r1 == 0) bound[atom.from.var] = a;
          if (r2 == 0 && !same_unbound_var) bound[atom.to.var] = b;
          go(idx + 1);
          if (r1 == 0) bound.erase(atom.from.var);
          if (r2 == 0 && !same_unbound_var) bound.erase(atom.to.var);
        }
        return;
      }
      case QueryAtom::Kind::ExistTest: {
        ObjId o = 0;
        int r = resolve(atom.from, o);
        if (r == -1) return;
        const std::set<ObjPair>& pairs = memo.pairs(atom.part);
        if (r == 1) {
          auto it = pairs.lower_bound({o, 0});
          if (it != pairs.end() && it->first == o) go(idx + 1);
          return;
        }
        ObjId last = 0;
        bool have_last = false;
        for (const auto& [a, b] : pairs) {
          (void)b;
          if (have_last && a == last) continue;
          last = a;
          have_last = true;
          bound[atom.from.var] = a;
          go(idx + 1);
          bound.erase(atom.from.var);
        }
        return;
      }
    }
    throw InternalError("unhandled atom shape");
  };

  go(0);
  return out;
}

}  // namespace nrpq
