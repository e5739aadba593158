// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/evaluator.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <utility>

namespace nrpq {

void ensure_individuals(NormalizedKB& kb, const std::vector<IndId>& inds) {
  for (IndId ind : inds) {
    if (std::find(kb.individuals.begin(), kb.individuals.end(), ind) ==
        kb.individuals.end()) {
      kb.individuals.push_back(ind);
    }
  }
}

Engine::Engine(const NormalizedKB& kb)
    : kb_(kb),
      sat_(kb_.tbox, kb_.vocab),
      reasoner_(sat_, kb_),
      loops_(kb_.tbox, kb_.vocab) {
  const std::vector<IndId>& inds = reasoner_.individuals();
  for (size_t i = 0; i < inds.size(); ++i) ind_rank_.emplace(inds[i], i);
}

void Engine::set_memo_enabled(bool on) {
  memo_enabled_ = on;
  if (!on) memo_.clear();
}

bool Engine::eval_atom(const NNFAPart& part, IndId a, IndId b) {
  if (ind_rank_.count(b) == 0) {
    throw InternalError("eval_atom endpoint is not a known individual");
  }
  const AtomOutcome& outcome = atom_outcome(part, a);
  return std::binary_search(outcome.ends.begin(), outcome.ends.end(), b);
}

bool Engine::eval_atom_anon(const NNFAPart& part, IndId a) {
  return atom_outcome(part, a).anon;
}

bool Engine::eval_atom(const NNFAPart& part, const EvalTarget& target) {
  return target.end ? eval_atom(part, target.start, *target.end)
                    : eval_atom_anon(part, target.start);
}

const Engine::AtomOutcome& Engine::atom_outcome(const NNFAPart& part,
                                                IndId a) {
  if (memo_enabled_) {
    MemoKey key{part.nnfa.get(), part.start, part.finals, a};
    auto it = memo_.find(key);
    if (it == memo_.end()) {
      it = memo_.emplace(key, compute_outcome(part, a)).first;
    }
    return it->second;
  }
  scratch_ = compute_outcome(part, a);
  return scratch_;
}

Engine::AtomOutcome Engine::compute_outcome(const NNFAPart& part, IndId a) {
  if (!consistent()) {
    throw InternalError("eval_atom requires a consistent knowledge base");
  }
  if (!part.nnfa->reduced()) {
    throw InternalError("eval_atom requires a reduced automaton family");
  }
  auto a_it = ind_rank_.find(a);
  if (a_it == ind_rank_.end()) {
    throw InternalError("eval_atom start is not a known individual");
  }

  const uint32_t focus = part.automaton();
  const Automaton& aut = part.nnfa->automata[focus];
  const std::vector<IndId>& inds = reasoner_.individuals();
  const size_t n_states = aut.states.size();
  LoopTables& tables = loops_.tables_for(part.nnfa);

  auto local_state = [&](StateId s) {
    return static_cast<size_t>(
        std::lower_bound(aut.states.begin(), aut.states.end(), s) -
        aut.states.begin());
  };
  std::vector<std::vector<const NNFATransition*>> out_of(n_states);
  for (const NNFATransition& t : aut.transitions) {
    out_of[local_state(t.from)].push_back(&t);
  }
  std::vector<bool> is_final(n_states, false);
  for (StateId f : part.finals) is_final[local_state(f)] = true;

  // Breadth-first search over individual-state pairs. Layers are minimal
  // path lengths, so the first acceptance per target realizes the shortest
  // accepting run; the paper's step bound must cover it.
  const int64_t bound =
      static_cast<int64_t>(reasoner_.abox_size()) * n_states + 1;
  auto slot = [&](size_t ci, size_t si) { return ci * n_states + si; };
  std::vector<int64_t> dist(inds.size() * n_states, -1);
  std::deque<std::pair<size_t, size_t>> queue;
  dist[slot(a_it->second, local_state(part.start))] = 0;
  queue.emplace_back(a_it->second, local_state(part.start));

  std::set<IndId> ends;
  int64_t anon_layer = -1;
  int64_t worst = 0;

  // Discharged obligation sets, computed once per individual per search.
  std::map<size_t, std::vector<StateId>> gammas;
  auto gamma_of = [&](size_t ci) -> const std::vector<StateId>& {
    auto it = gammas.find(ci);
    if (it == gammas.end()) {
      it = gammas.emplace(ci, gamma_star(part.nnfa, focus, inds[ci])).first;
    }
    return it->second;
  };

  while (!queue.empty()) {
    auto [ci, si] = queue.front();
    queue.pop_front();
    const int64_t layer = dist[slot(ci, si)];
    const IndId c = inds[ci];
    const StateId s_global = aut.states[si];
    const ConceptSet& type = reasoner_.ind_type(c);

    if (is_final[si]) {
      if (ends.insert(c).second) worst = std::max(worst, layer);
      if (anon_layer < 0) anon_layer = layer;
    }
    if (anon_layer < 0 &&
        tables.in_floop(type, s_global, part.finals, gamma_of(ci))) {
      anon_layer = layer + 1;
      worst = std::max(worst, layer + 1);
    }

    auto push = [&](size_t di, size_t ti) {
      int64_t& d = dist[slot(di, ti)];
      if (d < 0) {
        d = layer + 1;
        queue.emplace_back(di, ti);
      }
    };
    for (const NNFATransition* t : out_of[si]) {
      size_t ti = local_state(t->to);
      switch (t->label.kind) {
        case NNFALabel::Kind::Role:
          for (IndId d : reasoner_.role_successors(t->label.role, c)) {
            push(ind_rank_.at(d), ti);
          }
          break;
        case NNFALabel::Kind::ConceptTest:
          if (reasoner_.entails_assertion(t->label.concept_name, c)) {
            push(ci, ti);
          }
          break;
        case NNFALabel::Kind::NominalTest:
          if (t->label.individual == c) push(ci, ti);
          break;
        case NNFALabel::Kind::NestedTest:
          // Nested tests at named individuals are subsumed by the loop
          // move: the test's initial state sits in the discharged set
          // whenever the residual run from c succeeds.
          break;
      }
    }
    for (size_t ti = 0; ti < n_states; ++ti) {
      if (ti == si || dist[slot(ci, ti)] >= 0) continue;
      if (tables.in_loop(type, s_global, aut.states[ti], gamma_of(ci))) {
        push(ci, ti);
      }
    }
  }

  AtomOutcome out;
  out.ends.assign(ends.begin(), ends.end());
  out.anon = anon_layer >= 0;
  out.worst_accept_layer = static_cast<size_t>(worst);
  if (worst > bound) step_bound_ok_ = false;
  return out;
}

std::vector<StateId> Engine::gamma_star(const NNFAPtr& nnfa,
                                        uint32_t automaton, IndId c) {
  std::vector<StateId> out;
  for (StateId u = 0; u < nnfa->num_states(); ++u) {
    uint32_t j = nnfa->owner[u];
    if (j <= automaton) continue;
    NNFAPart residual;
    residual.nnfa = nnfa;
    residual.start = u;
    residual.finals = nnfa->automata[j].finals;
    if (atom_outcome(residual, c).anon) out.push_back(u);
  }
  return out;
}

bool Engine::holds_ground(const QueryAtom& atom,
                          const std::map<std::string, IndId>& env) {
  auto resolve = [&](const Term& t) {
    if (t.is_ind()) return t.ind;
    auto it = env.find(t.var);
    if (it == env.end()) {
      throw InternalError("unbound variable '" + t.var + "' in evaluation");
    }
    return it->second;
  };
  switch (atom.kind) {
    case QueryAtom::Kind::Concept:
      return reasoner_.entails_assertion(atom.concept_name,
                                         resolve(atom.from));
    case QueryAtom::Kind::Role:
      return eval_atom(atom.part, resolve(atom.from), resolve(atom.to));
    case QueryAtom::Kind::ExistTest:
      return eval_atom_anon(atom.part, resolve(atom.from));
  }
  throw InternalError("unhandled atom shape");
}

bool Engine::eval_boolean(const CN2RPQ& q) {
  std::vector<std::string> vars = existential_vars(q);
  const std::vector<IndId>& inds = reasoner_.individuals();
  if (!vars.empty() && inds.empty()) return false;

  std::vector<size_t> idx(vars.size(), 0);
  std::map<std::string, IndId> env;
  while (true) {
    for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = inds[idx[i]];
    bool all = true;
    for (const QueryAtom& atom : q.atoms) {
      if (!holds_ground(atom, env)) {
        all = false;
        break;
      }
    }
    if (all) return true;
    size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < inds.size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) return false;
  }
}

bool Engine::eval_query(const CN2RPQ& q) {
  if (!q.boolean()) {
    throw InternalError("eval_query requires a Boolean query");
  }
  if (!consistent()) return true;
  return eval_rewritten(rewriting(q));
}

bool Engine::eval_rewritten(const std::vector<CN2RPQ>& queries) {
  if (!consistent()) return true;
  for (const CN2RPQ& q : queries) {
    if (!q.boolean()) {
      throw InternalError("eval_rewritten requires Boolean queries");
    }
    if (eval_boolean(q)) return true;
  }
  return false;
}

std::vector<CN2RPQ> Engine::rewriting(const CN2RPQ& q) {
  return rewrite(q, sat_, loops_);
}

namespace {

// Substitutes individuals for the answer variables and drops the header,
// yielding the Boolean query of one candidate tuple.
CN2RPQ ground_answers(const CN2RPQ& q,
                      const std::map<std::string, IndId>& binding) {
  CN2RPQ out;
  out.atoms = q.atoms;
  for (QueryAtom& atom : out.atoms) {
    auto apply = [&](Term& t) {
      if (!t.is_var()) return;
      auto it = binding.find(t.var);
      if (it != binding.end()) t = Term::make_ind(it->second);
    };
    apply(atom.from);
    if (atom.kind == QueryAtom::Kind::Role) apply(atom.to);
  }
  return out;
}

}  // namespace

std::set<std::vector<IndId>> Engine::certain_answers(const CN2RPQ& q) {
  if (!consistent()) return certain_answers(q, {});
  return certain_answers(q, rewriting(q));
}

std::set<std::vector<IndId>> Engine::certain_answers(
    const CN2RPQ& q, const std::vector<CN2RPQ>& rewriting) {
  const std::vector<IndId>& inds = reasoner_.individuals();
  const size_t k = q.answer_vars.size();
  std::set<std::vector<IndId>> out;

  if (!consistent()) {
    // Every tuple is vacuously certain.
    if (k == 0) {
      out.insert({});
      return out;
    }
    if (inds.empty()) return out;
    std::vector<size_t> idx(k, 0);
    while (true) {
      std::vector<IndId> tuple;
      for (size_t i : idx) tuple.push_back(inds[i]);
      out.insert(std::move(tuple));
      size_t i = 0;
      for (; i < k; ++i) {
        if (++idx[i] < inds.size()) break;
        idx[i] = 0;
      }
      if (i == k) return out;
    }
  }

  if (k == 0) {
    if (eval_rewritten(rewriting)) out.insert({});
    return out;
  }
  if (inds.empty()) return out;

  std::vector<size_t> idx(k, 0);
  std::map<std::string, IndId> binding;
  while (true) {
    std::vector<IndId> tuple;
    for (size_t i = 0; i < k; ++i) {
      binding[q.answer_vars[i]] = inds[idx[i]];
      tuple.push_back(inds[idx[i]]);
    }
    for (const CN2RPQ& member : rewriting) {
      if (eval_boolean(ground_answers(member, binding))) {
        out.insert(tuple);
        break;
      }
    }
    size_t i = 0;
    for (; i < k; ++i) {
      if (++idx[i] < inds.size()) break;
      idx[i] = 0;
    }
    if (i == k) break;
  }
  return out;
}

namespace {

std::vector<IndId> mentioned_individuals(const CN2RPQ& q,
                                         const std::vector<ConceptFact>& facts) {
  std::vector<IndId> inds;
  for (const QueryAtom& atom : q.atoms) {
    for (const Term& t : atom.terms()) {
      if (t.is_ind()) inds.push_back(t.ind);
    }
  }
  for (const ConceptFact& f : facts) inds.push_back(f.ind);
  std::sort(inds.begin(), inds.end());
  inds.erase(std::unique(inds.begin(), inds.end()), inds.end());
  return inds;
}

NormalizedKB with_markers(const NormalizedKB& kb, const CN2RPQ& q,
                          const std::vector<ConceptFact>& facts) {
  NormalizedKB extended = kb;
  for (const ConceptFact& f : facts) extended.concept_facts.push_back(f);
  ensure_individuals(extended, mentioned_individuals(q, facts));
  return extended;
}

}  // namespace

bool eval_query(const CN2RPQ& q, const NormalizedKB& kb) {
  auto [clean, facts] = eliminate_nominal_tests(q, *kb.vocab);
  Engine engine(with_markers(kb, clean, facts));
  return engine.eval_query(clean);
}

std::set<std::vector<IndId>> certain_answers(const CN2RPQ& q,
                                             const NormalizedKB& kb) {
  auto [clean, facts] = eliminate_nominal_tests(q, *kb.vocab);
  Engine engine(with_markers(kb, clean, facts));
  return engine.certain_answers(clean);
}

}  // namespace nrpq
