// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/query.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace nrpq {

Term Term::make_var(std::string name) {
  Term t;
  t.kind = Kind::Var;
  t.var = std::move(name);
  return t;
}

Term Term::make_ind(IndId a) {
  Term t;
  t.kind = Kind::Ind;
  t.ind = a;
  return t;
}

QueryAtom QueryAtom::concept_atom(ConceptId a, Term t) {
  QueryAtom atom;
  atom.kind = Kind::Concept;
  atom.concept_name = a;
  atom.from = std::move(t);
  return atom;
}

QueryAtom QueryAtom::role_atom(NNFAPart part, Term t1, Term t2) {
  QueryAtom atom;
  atom.kind = Kind::Role;
  atom.part = std::move(part);
  atom.from = std::move(t1);
  atom.to = std::move(t2);
  return atom;
}

QueryAtom QueryAtom::exist_test_atom(NNFAPart part, Term t) {
  QueryAtom atom;
  atom.kind = Kind::ExistTest;
  atom.part = std::move(part);
  atom.from = std::move(t);
  return atom;
}

std::vector<Term> QueryAtom::terms() const {
  if (kind == Kind::Role) return {from, to};
  return {from};
}

namespace {

struct QueryParser {
  const std::string& text;
  size_t pos = 0;
  Vocabulary& vocab;

  [[noreturn]] void fail(const std::string& msg) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < pos && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip_space() {
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        ++pos;
      } else if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  bool try_consume(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!try_consume(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  bool at_ident() {
    skip_space();
    return pos < text.size() &&
           std::isalpha(static_cast<unsigned char>(text[pos])) != 0;
  }

  std::string ident() {
    if (!at_ident()) fail("expected an identifier");
    size_t start = pos;
    ++pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) != 0 ||
            text[pos] == '_')) {
      ++pos;
    }
    return text.substr(start, pos - start);
  }

  // A concept atom is NAME '(' VAR ')' with nothing of the expression
  // grammar in between; anything else is an expression atom.
  bool try_concept_atom(QueryAtom& out) {
    size_t save = pos;
    if (!at_ident()) return false;
    std::string name = ident();
    if (pos < text.size() && (text[pos] == '?' || text[pos] == '-')) {
      pos = save;
      return false;
    }
    if (!try_consume('(')) {
      pos = save;
      return false;
    }
    if (!at_ident()) {
      pos = save;
      return false;
    }
    std::string term = ident();
    if (!try_consume(')')) {
      pos = save;
      return false;
    }
    out = QueryAtom::concept_atom(vocab.concept_id(name),
                                  Term::make_var(term));
    return true;
  }

  QueryAtom parse_atom() {
    QueryAtom atom;
    if (try_concept_atom(atom)) return atom;
    NREPtr e = parse_nre_prefix(text, pos, vocab);
    expect('(', "before the atom's terms");
    std::string t1 = ident();
    expect(',', "between the atom's terms");
    std::string t2 = ident();
    expect(')', "after the atom's terms");
    NNFAPart part = reduce_part(compile_nre(*e, vocab));
    return QueryAtom::role_atom(std::move(part), Term::make_var(t1),
                                Term::make_var(t2));
  }

  // compile_nre emits reduced automata already; reducing again keeps the
  // guarantee independent of the compiler's internals.
  static NNFAPart reduce_part(NNFAPart part) {
    if (part.nnfa->reduced()) return part;
    part.nnfa = std::make_shared<const NNFA>(reduce_nnfa(*part.nnfa));
    return part;
  }

  CN2RPQ parse() {
    CN2RPQ q;
    std::string head = ident();
    if (head != "q") fail("a query must be named 'q'");
    expect('(', "after the query name");
    if (!try_consume(')')) {
      while (true) {
        std::string v = ident();
        if (std::find(q.answer_vars.begin(), q.answer_vars.end(), v) !=
            q.answer_vars.end()) {
          fail("answer variable '" + v + "' is listed twice");
        }
        q.answer_vars.push_back(v);
        if (try_consume(')')) break;
        expect(',', "between answer variables");
      }
    }
    expect('<', "in '<-' after the query head");
    expect('-', "in '<-' after the query head");
    q.atoms.push_back(parse_atom());
    while (try_consume(',')) q.atoms.push_back(parse_atom());
    skip_space();
    if (pos != text.size()) fail("unexpected input after the query");

    std::set<std::string> body_vars;
    for (const QueryAtom& atom : q.atoms) {
      for (const Term& t : atom.terms()) {
        if (t.is_var()) body_vars.insert(t.var);
      }
    }
    for (const std::string& v : q.answer_vars) {
      if (body_vars.count(v) == 0) {
        fail("undeclared answer variable '" + v +
             "': it does not occur in the body");
      }
    }
    return q;
  }
};

}  // namespace

CN2RPQ parse_query(const std::string& text, Vocabulary& vocab) {
  QueryParser parser{text, 0, vocab};
  return parser.parse();
}

std::string print_term(const Term& t, const Vocabulary& vocab) {
  return t.is_var() ? t.var : vocab.ind_name(t.ind);
}

std::string print_atom(const QueryAtom& atom, const Vocabulary& vocab) {
  switch (atom.kind) {
    case QueryAtom::Kind::Concept:
      return vocab.concept_name(atom.concept_name) + "(" +
             print_term(atom.from, vocab) + ")";
    case QueryAtom::Kind::Role:
      return print_part(atom.part) + "(" + print_term(atom.from, vocab) +
             ", " + print_term(atom.to, vocab) + ")";
    case QueryAtom::Kind::ExistTest:
      return "<" + print_part(atom.part) + ">(" +
             print_term(atom.from, vocab) + ")";
  }
  throw InternalError("unhandled atom shape");
}

std::string print_query(const CN2RPQ& q, const Vocabulary& vocab) {
  std::string out = "q(";
  for (size_t i = 0; i < q.answer_vars.size(); ++i) {
    if (i > 0) out += ", ";
    out += q.answer_vars[i];
  }
  out += ") <- ";
  for (size_t i = 0; i < q.atoms.size(); ++i) {
    if (i > 0) out += ", ";
    out += print_atom(q.atoms[i], vocab);
  }
  return out;
}

std::vector<std::string> query_vars(const CN2RPQ& q) {
  std::set<std::string> vars;
  for (const QueryAtom& atom : q.atoms) {
    for (const Term& t : atom.terms()) {
      if (t.is_var()) vars.insert(t.var);
    }
  }
  return {vars.begin(), vars.end()};
}

std::vector<std::string> existential_vars(const CN2RPQ& q) {
  std::vector<std::string> out;
  for (const std::string& v : query_vars(q)) {
    if (std::find(q.answer_vars.begin(), q.answer_vars.end(), v) ==
        q.answer_vars.end()) {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<Term> query_terms(const CN2RPQ& q) {
  std::vector<Term> out;
  for (const QueryAtom& atom : q.atoms) {
    for (const Term& t : atom.terms()) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct NominalEliminator {
  Vocabulary& vocab;
  std::map<IndId, ConceptId> fresh;
  std::map<const NNFA*, NNFAPtr> rebuilt;
  std::vector<ConceptFact> facts;

  ConceptId name_for(IndId a) {
    auto it = fresh.find(a);
    if (it != fresh.end()) return it->second;
    ConceptId c = vocab.fresh_concept("A_" + vocab.ind_name(a));
    fresh.emplace(a, c);
    facts.push_back(ConceptFact{c, a});
    return c;
  }

  NNFAPtr rebuild(const NNFAPtr& n) {
    auto it = rebuilt.find(n.get());
    if (it != rebuilt.end()) return it->second;
    bool has_nominal = false;
    for (const Automaton& a : n->automata) {
      for (const NNFATransition& t : a.transitions) {
        has_nominal |= t.label.kind == NNFALabel::Kind::NominalTest;
      }
    }
    NNFAPtr out = n;
    if (has_nominal) {
      NNFA copy = *n;
      for (Automaton& a : copy.automata) {
        for (NNFATransition& t : a.transitions) {
          if (t.label.kind == NNFALabel::Kind::NominalTest) {
            t.label = NNFALabel::concept_test(name_for(t.label.individual));
          }
        }
      }
      out = std::make_shared<const NNFA>(std::move(copy));
    }
    rebuilt.emplace(n.get(), out);
    return out;
  }
};

}  // namespace

std::pair<CN2RPQ, std::vector<ConceptFact>> eliminate_nominal_tests(
    const CN2RPQ& q, Vocabulary& vocab) {
  NominalEliminator elim{vocab, {}, {}, {}};
  CN2RPQ out = q;
  for (QueryAtom& atom : out.atoms) {
    if (atom.kind == QueryAtom::Kind::Concept) continue;
    atom.part.nnfa = elim.rebuild(atom.part.nnfa);
  }
  return {std::move(out), std::move(elim.facts)};
}

}  // namespace nrpq
