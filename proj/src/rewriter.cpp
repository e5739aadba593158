// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/rewriter.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>

namespace nrpq {

namespace {

std::string label_text(const NNFALabel& label, const Vocabulary& vocab) {
  switch (label.kind) {
    case NNFALabel::Kind::Role:
      return "r:" + vocab.role_expr_name(label.role);
    case NNFALabel::Kind::ConceptTest:
      return "c:" + vocab.concept_name(label.concept_name);
    case NNFALabel::Kind::NominalTest:
      return "n:" + vocab.ind_name(label.individual);
    case NNFALabel::Kind::NestedTest: {
      std::string s = "t:";
      for (uint32_t j : label.tests) s += std::to_string(j) + ",";
      return s;
    }
  }
  throw InternalError("unhandled label shape");
}

// Pointer-independent description of an automaton family, so structurally
// equal families canonicalize to the same key.
std::string nnfa_structure(const NNFA& n, const Vocabulary& vocab) {
  std::string out;
  for (const Automaton& a : n.automata) {
    out += "[i" + std::to_string(a.initial) + ";f";
    for (StateId f : a.finals) out += std::to_string(f) + ",";
    std::vector<std::string> trans;
    for (const NNFATransition& t : a.transitions) {
      trans.push_back(std::to_string(t.from) + "-" +
                      label_text(t.label, vocab) + "-" +
                      std::to_string(t.to));
    }
    std::sort(trans.begin(), trans.end());
    out += ";d";
    for (const std::string& t : trans) out += t + "|";
    out += "]";
  }
  return out;
}

std::string part_token(const NNFAPart& part,
                       const std::map<const NNFA*, size_t>& registry) {
  std::string out = "N" + std::to_string(registry.at(part.nnfa.get())) +
                    ":" + std::to_string(part.start) + ":";
  for (StateId f : part.finals) out += std::to_string(f) + ",";
  return out;
}

}  // namespace

std::string canonical_query_form(const CN2RPQ& q, const Vocabulary& vocab) {
  // Rank automaton families by structure, not by pointer, so that separately
  // compiled but identical families cannot split the key.
  std::map<const NNFA*, std::string> structures;
  for (const QueryAtom& atom : q.atoms) {
    if (atom.kind == QueryAtom::Kind::Concept) continue;
    const NNFA* key = atom.part.nnfa.get();
    if (structures.count(key) == 0) {
      structures[key] = nnfa_structure(*atom.part.nnfa, vocab);
    }
  }
  std::vector<std::string> ordered;
  for (const auto& [key, text] : structures) ordered.push_back(text);
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  std::map<const NNFA*, size_t> registry;
  for (const auto& [key, text] : structures) {
    registry[key] = static_cast<size_t>(
        std::lower_bound(ordered.begin(), ordered.end(), text) -
        ordered.begin());
  }

  std::vector<std::string> exvars = existential_vars(q);
  std::set<std::string> answers(q.answer_vars.begin(), q.answer_vars.end());

  auto serialize = [&](const std::map<std::string, size_t>& exrank) {
    auto term_token = [&](const Term& t) {
      if (t.is_ind()) return "I" + vocab.ind_name(t.ind);
      if (answers.count(t.var) > 0) return "A" + t.var;
      return "E" + std::to_string(exrank.at(t.var));
    };
    std::vector<std::string> atoms;
    for (const QueryAtom& atom : q.atoms) {
      switch (atom.kind) {
        case QueryAtom::Kind::Concept:
          atoms.push_back("C" + vocab.concept_name(atom.concept_name) + "(" +
                          term_token(atom.from) + ")");
          break;
        case QueryAtom::Kind::Role:
          atoms.push_back("R" + part_token(atom.part, registry) + "(" +
                          term_token(atom.from) + "," +
                          term_token(atom.to) + ")");
          break;
        case QueryAtom::Kind::ExistTest:
          atoms.push_back("T" + part_token(atom.part, registry) + "(" +
                          term_token(atom.from) + ")");
          break;
      }
    }
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    std::string out;
    for (const std::string& a : atoms) out += a + ";";
    return out;
  };

  std::string best;
  if (exvars.size() <= 7) {
    std::vector<size_t> perm(exvars.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
      std::map<std::string, size_t> exrank;
      for (size_t i = 0; i < perm.size(); ++i) exrank[exvars[i]] = perm[i];
      std::string s = serialize(exrank);
      if (best.empty() || s < best) best = s;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Too many variables to canonicalize exactly; rank by first occurrence.
    // Renamed copies of a query may then receive distinct keys, which only
    // weakens deduplication, never correctness.
    std::map<std::string, size_t> exrank;
    for (const QueryAtom& atom : q.atoms) {
      for (const Term& t : atom.terms()) {
        if (t.is_var() && answers.count(t.var) == 0 &&
            exrank.count(t.var) == 0) {
          exrank.emplace(t.var, exrank.size());
        }
      }
    }
    best = serialize(exrank);
  }

  std::string head = "q(";
  for (const std::string& v : q.answer_vars) head += v + ",";
  return head + ")<-" + best;
}

namespace {

// Choices shared across the recursive enumeration of one rewriting pass.
struct RewritePass {
  SaturatedTBox& sat;
  LoopTableSet& loops;
  const Vocabulary& vocab;
  std::vector<CN2RPQ>& out;
  std::set<std::string>& seen;

  void emit(const std::vector<std::string>& answer_vars,
            std::vector<QueryAtom> atoms) {
    CN2RPQ q;
    q.answer_vars = answer_vars;
    q.atoms = std::move(atoms);
    std::string key = canonical_query_form(q, vocab);
    if (seen.insert(std::move(key)).second) out.push_back(std::move(q));
  }
};

bool touches(const QueryAtom& atom, const Term& y) {
  for (const Term& t : atom.terms()) {
    if (t == y) return true;
  }
  return false;
}

NNFAPart subpart(const NNFAPart& base, StateId start,
                 std::vector<StateId> finals) {
  NNFAPart part;
  part.nnfa = base.nnfa;
  part.start = start;
  part.finals = std::move(finals);
  std::sort(part.finals.begin(), part.finals.end());
  return part;
}

// All decompositions of one atom through y: each entry is the replacement
// atom list for one choice of pairwise-distinct intermediate states and one
// final state. The length-1 decomposition pins the final and keeps the
// original terms.
std::vector<std::vector<QueryAtom>> decompose_atom(const QueryAtom& atom,
                                                   const Term& y) {
  const NNFAPart& part = atom.part;
  const Automaton& aut = part.nnfa->automata[part.automaton()];
  std::vector<std::vector<QueryAtom>> result;

  for (StateId f : part.finals) {
    if (atom.kind == QueryAtom::Kind::Role) {
      result.push_back({QueryAtom::role_atom(subpart(part, part.start, {f}),
                                             atom.from, atom.to)});
    } else {
      result.push_back({QueryAtom::exist_test_atom(
          subpart(part, part.start, {f}), atom.from)});
    }
  }

  std::vector<StateId> seq;
  std::function<void()> extend = [&]() {
    for (StateId f : part.finals) {
      std::vector<QueryAtom> atoms;
      StateId prev = part.start;
      Term left = atom.from;
      for (StateId s : seq) {
        atoms.push_back(
            QueryAtom::role_atom(subpart(part, prev, {s}), left, y));
        prev = s;
        left = y;
      }
      if (atom.kind == QueryAtom::Kind::Role) {
        atoms.push_back(
            QueryAtom::role_atom(subpart(part, prev, {f}), y, atom.to));
      } else {
        atoms.push_back(
            QueryAtom::exist_test_atom(subpart(part, prev, {f}), y));
      }
      result.push_back(std::move(atoms));
    }
    for (StateId s : aut.states) {
      if (std::find(seq.begin(), seq.end(), s) != seq.end()) continue;
      seq.push_back(s);
      extend();
      seq.pop_back();
    }
  };
  for (StateId s : aut.states) {
    seq = {s};
    extend();
  }
  return result;
}

// States owned by automata with index above the atom's own: the universe a
// discharge set is drawn from.
std::vector<StateId> states_above(const NNFAPart& part) {
  uint32_t i = part.automaton();
  std::vector<StateId> out;
  for (StateId s = 0; s < part.nnfa->num_states(); ++s) {
    if (part.nnfa->owner[s] > i) out.push_back(s);
  }
  return out;
}

// States v with a transition start -[r1^-]-> v in the atom's own automaton.
// Entering the expression at the witness lets a run climb from the fresh
// successor back to its parent first.
std::vector<StateId> climb_witnesses(const QueryAtom& atom, RoleExpr r1) {
  const Automaton& aut = atom.part.nnfa->automata[atom.part.automaton()];
  RoleExpr want = r1.inverse();
  std::vector<StateId> out;
  for (const NNFATransition& t : aut.transitions) {
    if (t.from == atom.part.start && t.label.kind == NNFALabel::Kind::Role &&
        t.label.role == want) {
      out.push_back(t.to);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// States v with a transition v -[r2]-> v' into the atom's final set: ending
// the expression at the witness leaves exactly the final descent into the
// fresh successor unread.
std::vector<StateId> descend_witnesses(const QueryAtom& atom, RoleExpr r2) {
  const Automaton& aut = atom.part.nnfa->automata[atom.part.automaton()];
  std::vector<StateId> out;
  for (const NNFATransition& t : aut.transitions) {
    if (t.label.kind == NNFALabel::Kind::Role && t.label.role == r2 &&
        std::binary_search(atom.part.finals.begin(), atom.part.finals.end(),
                           t.to)) {
      out.push_back(t.from);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Steps 6 to 8: pick a concept name D whose instances carry the required
// successor, pick the role and its climb/descent weakenings, re-point every
// atom on y at witness states of its own automaton, and close with D(y).
void run_steps_6_to_8(RewritePass& pass,
                      const std::vector<std::string>& answer_vars,
                      const std::vector<QueryAtom>& body, const Term& y,
                      const ConceptSet& c) {
  std::vector<size_t> climb, descend;
  for (size_t i = 0; i < body.size(); ++i) {
    const QueryAtom& atom = body[i];
    if (atom.kind == QueryAtom::Kind::Role) {
      if (atom.from == y) climb.push_back(i);
      if (atom.to == y) descend.push_back(i);
    } else if (atom.kind == QueryAtom::Kind::ExistTest && atom.from == y) {
      climb.push_back(i);
    }
  }

  std::set<RoleExpr> role_pool(pass.sat.tbox_role_exprs().begin(),
                               pass.sat.tbox_role_exprs().end());
  auto add_labels = [&](const QueryAtom& atom) {
    const Automaton& aut = atom.part.nnfa->automata[atom.part.automaton()];
    for (const NNFATransition& t : aut.transitions) {
      if (t.label.kind == NNFALabel::Kind::Role) {
        role_pool.insert(t.label.role);
        role_pool.insert(t.label.role.inverse());
      }
    }
  };
  for (size_t i : climb) add_labels(body[i]);
  for (size_t i : descend) add_labels(body[i]);

  for (ConceptId d : pass.sat.tbox_concept_names()) {
    NodeId node = pass.sat.register_conjunction(make_set({d}));
    bool exfalso = pass.sat.inconsistent(node);
    std::vector<SaturatedTBox::Existential> exs;
    if (!exfalso) exs = pass.sat.existentials(node);

    for (RoleExpr r : role_pool) {
      bool admissible = exfalso;
      for (const SaturatedTBox::Existential& ex : exs) {
        if (admissible) break;
        admissible = pass.sat.role_sub(ex.role, r) &&
                     set_includes(pass.sat.supers(ex.target), c);
      }
      if (!admissible) continue;

      if (climb.empty() && descend.empty()) {
        // No atom mentions y any more; every admissible role yields the
        // same query, so one emission per D suffices.
        std::vector<QueryAtom> final_atoms = body;
        final_atoms.push_back(QueryAtom::concept_atom(d, y));
        pass.emit(answer_vars, std::move(final_atoms));
        break;
      }

      std::vector<RoleExpr> r1s =
          climb.empty() ? std::vector<RoleExpr>{r} : pass.sat.role_supers(r);
      std::vector<RoleExpr> r2s = descend.empty()
                                      ? std::vector<RoleExpr>{r}
                                      : pass.sat.role_supers(r);
      for (RoleExpr r1 : r1s) {
        std::map<size_t, std::vector<StateId>> vb;
        bool ok = true;
        for (size_t i : climb) {
          vb[i] = climb_witnesses(body[i], r1);
          if (vb[i].empty()) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;

        for (RoleExpr r2 : r2s) {
          std::map<size_t, std::vector<StateId>> vc;
          bool ok2 = true;
          for (size_t i : descend) {
            vc[i] = descend_witnesses(body[i], r2);
            if (vc[i].empty()) {
              ok2 = false;
              break;
            }
          }
          if (!ok2) continue;

          std::vector<size_t> affected = climb;
          affected.insert(affected.end(), descend.begin(), descend.end());
          std::sort(affected.begin(), affected.end());
          affected.erase(std::unique(affected.begin(), affected.end()),
                         affected.end());

          std::vector<QueryAtom> rebuilt = body;
          std::function<void(size_t)> choose = [&](size_t k) {
            if (k == affected.size()) {
              std::vector<QueryAtom> final_atoms = rebuilt;
              final_atoms.push_back(QueryAtom::concept_atom(d, y));
              pass.emit(answer_vars, std::move(final_atoms));
              return;
            }
            size_t i = affected[k];
            const QueryAtom& orig = body[i];
            bool need_b = vb.count(i) > 0;
            bool need_c = vc.count(i) > 0;
            if (need_b && need_c) {
              for (StateId b : vb[i]) {
                for (StateId e : vc[i]) {
                  rebuilt[i] = QueryAtom::role_atom(
                      subpart(orig.part, b, {e}), orig.from, orig.to);
                  choose(k + 1);
                }
              }
            } else if (need_b) {
              for (StateId b : vb[i]) {
                NNFAPart moved = subpart(orig.part, b, orig.part.finals);
                rebuilt[i] =
                    orig.kind == QueryAtom::Kind::Role
                        ? QueryAtom::role_atom(std::move(moved), orig.from,
                                               orig.to)
                        : QueryAtom::exist_test_atom(std::move(moved),
                                                     orig.from);
                choose(k + 1);
              }
            } else {
              for (StateId e : vc[i]) {
                rebuilt[i] = QueryAtom::role_atom(
                    subpart(orig.part, orig.part.start, {e}), orig.from,
                    orig.to);
                choose(k + 1);
              }
            }
          };
          choose(0);
        }
      }
    }
  }
}

}  // namespace

std::vector<CN2RPQ> rewrite_step(const CN2RPQ& q, SaturatedTBox& sat,
                                 LoopTableSet& loops) {
  std::vector<CN2RPQ> out;
  std::set<std::string> seen;
  RewritePass pass{sat, loops, *sat.vocab_ptr(), out, seen};

  std::vector<std::string> exvars = existential_vars(q);
  if (exvars.empty() || exvars.size() >= 64) return out;

  for (uint64_t mask = 1; mask < (uint64_t{1} << exvars.size()); ++mask) {
    // Step 2: merge the chosen existential variables into their smallest
    // member.
    std::vector<std::string> leaf;
    for (size_t i = 0; i < exvars.size(); ++i) {
      if ((mask >> i) & 1) leaf.push_back(exvars[i]);
    }
    Term y = Term::make_var(leaf.front());
    CN2RPQ merged = q;
    for (QueryAtom& atom : merged.atoms) {
      auto rename = [&](Term& t) {
        if (t.is_var() &&
            std::find(leaf.begin(), leaf.end(), t.var) != leaf.end()) {
          t = y;
        }
      };
      rename(atom.from);
      if (atom.kind == QueryAtom::Kind::Role) rename(atom.to);
    }

    // Step 3: a candidate type for y must entail every concept atom on y;
    // those atoms are consumed here.
    std::vector<ConceptId> required;
    std::vector<QueryAtom> kept;
    for (const QueryAtom& atom : merged.atoms) {
      if (atom.kind == QueryAtom::Kind::Concept && atom.from == y) {
        required.push_back(atom.concept_name);
      } else {
        kept.push_back(atom);
      }
    }
    std::vector<ConceptSet> candidates_c;
    {
      auto admissible = [&](const ConceptSet& c) {
        for (ConceptId b : required) {
          if (!sat.entails_subsumption(c, make_set({b}))) return false;
        }
        return true;
      };
      if (admissible({})) candidates_c.push_back({});
      for (ConceptId a : sat.tbox_concept_names()) {
        ConceptSet c = make_set({a});
        if (admissible(c)) candidates_c.push_back(std::move(c));
      }
    }
    if (candidates_c.empty()) continue;

    std::vector<QueryAtom> on_y, off_y;
    for (const QueryAtom& atom : kept) {
      (touches(atom, y) ? on_y : off_y).push_back(atom);
    }

    // Step 4 choices per atom through y, computed once per leaf set.
    std::vector<std::vector<std::vector<QueryAtom>>> decompositions;
    for (const QueryAtom& atom : on_y) {
      decompositions.push_back(decompose_atom(atom, y));
    }

    for (const ConceptSet& c : candidates_c) {
      std::vector<QueryAtom> chosen;
      std::function<void(size_t)> pick = [&](size_t idx) {
        if (idx < decompositions.size()) {
          for (const std::vector<QueryAtom>& piece : decompositions[idx]) {
            size_t checkpoint = chosen.size();
            chosen.insert(chosen.end(), piece.begin(), piece.end());
            pick(idx + 1);
            chosen.resize(checkpoint);
          }
          return;
        }

        // Step 5: each single-final atom looping on y, and each test atom
        // on y, may be discharged into obligations against higher automata.
        std::vector<size_t> eligible;
        for (size_t i = 0; i < chosen.size(); ++i) {
          const QueryAtom& atom = chosen[i];
          if (atom.kind == QueryAtom::Kind::Concept) continue;
          if (atom.part.finals.size() != 1) continue;
          bool yy = atom.kind == QueryAtom::Kind::Role && atom.from == y &&
                    atom.to == y;
          bool test =
              atom.kind == QueryAtom::Kind::ExistTest && atom.from == y;
          if (yy || test) eligible.push_back(i);
        }

        std::vector<std::vector<std::vector<QueryAtom>>> options(
            eligible.size());
        for (size_t k = 0; k < eligible.size(); ++k) {
          const QueryAtom& atom = chosen[eligible[k]];
          options[k].push_back({atom});
          LoopTables& tables = loops.tables_for(atom.part.nnfa);
          std::vector<StateId> universe = states_above(atom.part);
          if (universe.size() > 20) {
            throw InternalError(
                "discharge enumeration over more than 20 nested states");
          }
          for (uint64_t gmask = 0;
               gmask < (uint64_t{1} << universe.size()); ++gmask) {
            std::vector<StateId> gamma;
            for (size_t b = 0; b < universe.size(); ++b) {
              if ((gmask >> b) & 1) gamma.push_back(universe[b]);
            }
            bool member =
                atom.kind == QueryAtom::Kind::Role
                    ? tables.in_loop(c, atom.part.start, atom.part.finals[0],
                                     gamma)
                    : tables.in_floop(c, atom.part.start, atom.part.finals,
                                      gamma);
            if (!member) continue;
            std::vector<QueryAtom> replaced;
            for (StateId u : gamma) {
              const Automaton& owner_aut =
                  atom.part.nnfa->automata[atom.part.nnfa->owner[u]];
              replaced.push_back(QueryAtom::exist_test_atom(
                  subpart(atom.part, u, owner_aut.finals), y));
            }
            options[k].push_back(std::move(replaced));
          }
        }

        std::vector<QueryAtom> after5;
        std::function<void(size_t)> pick5 = [&](size_t k) {
          if (k < eligible.size()) {
            size_t prev = k == 0 ? 0 : eligible[k - 1] + 1;
            size_t checkpoint = after5.size();
            for (size_t i = prev; i < eligible[k]; ++i) {
              after5.push_back(chosen[i]);
            }
            for (const std::vector<QueryAtom>& repl : options[k]) {
              size_t inner = after5.size();
              after5.insert(after5.end(), repl.begin(), repl.end());
              pick5(k + 1);
              after5.resize(inner);
            }
            after5.resize(checkpoint);
            return;
          }
          size_t tail = eligible.empty() ? 0 : eligible.back() + 1;
          size_t checkpoint = after5.size();
          for (size_t i = tail; i < chosen.size(); ++i) {
            after5.push_back(chosen[i]);
          }

          std::vector<QueryAtom> body = off_y;
          body.insert(body.end(), after5.begin(), after5.end());
          run_steps_6_to_8(pass, q.answer_vars, body, y, c);
          after5.resize(checkpoint);
        };
        pick5(0);
      };
      pick(0);
    }
  }
  return out;
}

std::vector<CN2RPQ> rewrite(const CN2RPQ& q, SaturatedTBox& sat,
                            LoopTableSet& loops) {
  const Vocabulary& vocab = *sat.vocab_ptr();
  std::vector<CN2RPQ> out;
  std::set<std::string> seen;
  out.push_back(q);
  seen.insert(canonical_query_form(q, vocab));
  for (size_t i = 0; i < out.size(); ++i) {
    CN2RPQ current = out[i];
    for (CN2RPQ& next : rewrite_step(current, sat, loops)) {
      std::string key = canonical_query_form(next, vocab);
      if (seen.insert(std::move(key)).second) out.push_back(std::move(next));
    }
  }
  return out;
}

}  // namespace nrpq
