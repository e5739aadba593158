// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#include "nrpq/kb.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace nrpq {

ConceptPtr Concept::top() {
  static const ConceptPtr t = std::make_shared<Concept>();
  return t;
}

ConceptPtr Concept::bot() {
  static const ConceptPtr b = [] {
    auto p = std::make_shared<Concept>();
    p->kind = Kind::Bot;
    return p;
  }();
  return b;
}

ConceptPtr Concept::make_name(ConceptId c) {
  auto p = std::make_shared<Concept>();
  p->kind = Kind::Name;
  p->name = c;
  return p;
}

ConceptPtr Concept::exists(RoleExpr r, ConceptPtr filler) {
  auto p = std::make_shared<Concept>();
  p->kind = Kind::Exists;
  p->role = r;
  p->lhs = std::move(filler);
  return p;
}

ConceptPtr Concept::conj(ConceptPtr a, ConceptPtr b) {
  auto p = std::make_shared<Concept>();
  p->kind = Kind::And;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  return p;
}

bool concept_equal(const ConceptPtr& a, const ConceptPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Concept::Kind::Top:
    case Concept::Kind::Bot:
      return true;
    case Concept::Kind::Name:
      return a->name == b->name;
    case Concept::Kind::Exists:
      return a->role == b->role && concept_equal(a->lhs, b->lhs);
    case Concept::Kind::And:
      return concept_equal(a->lhs, b->lhs) && concept_equal(a->rhs, b->rhs);
  }
  return false;
}

const char* fragment_tag(Fragment f) {
  switch (f) {
    case Fragment::ELHIbot: return "elhi-bot";
    case Fragment::ELHI: return "elhi";
    case Fragment::ELH: return "elh";
    case Fragment::ELI: return "eli";
    case Fragment::EL: return "el";
    case Fragment::DLLiteR: return "dl-lite-r";
    case Fragment::DLLiteCore: return "dl-lite-core";
    case Fragment::Plain: return "plain";
  }
  return "elhi-bot";
}

Fragment fragment_from_tag(const std::string& tag) {
  for (Fragment f : {Fragment::ELHIbot, Fragment::ELHI, Fragment::ELH,
                     Fragment::ELI, Fragment::EL, Fragment::DLLiteR,
                     Fragment::DLLiteCore, Fragment::Plain}) {
    if (tag == fragment_tag(f)) return f;
  }
  throw ParseError("unknown fragment tag '" + tag + "'");
}

std::vector<IndId> KB::individuals() const {
  std::vector<IndId> out;
  auto add = [&out](IndId a) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  };
  for (const auto& ca : abox.concept_assertions) add(ca.ind);
  for (const auto& ra : abox.role_assertions) {
    add(ra.from);
    add(ra.to);
  }
  return out;
}

namespace {

// Line-oriented tokenizer for the KB format.
struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_space_and_comments() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  bool eof() {
    skip_space_and_comments();
    return pos >= text.size();
  }

  // Peeks without consuming; '\0' at end of input.
  char peek() {
    skip_space_and_comments();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool try_consume(const std::string& tok) {
    skip_space_and_comments();
    if (text.compare(pos, tok.size(), tok) == 0) {
      for (size_t i = 0; i < tok.size(); ++i) advance();
      return true;
    }
    return false;
  }

  void expect(const std::string& tok, const char* what) {
    if (!try_consume(tok))
      throw ParseError(std::string("expected '") + tok + "' " + what, line,
                       col);
  }

  // Identifier: letter followed by letters, digits, underscores.
  std::string ident(const char* what) {
    skip_space_and_comments();
    if (pos >= text.size() ||
        !std::isalpha(static_cast<unsigned char>(text[pos])))
      throw ParseError(std::string("expected ") + what, line, col);
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      advance();
    return text.substr(start, pos - start);
  }
};

bool is_concept_ident(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

struct KbParser {
  Lexer lex;
  Vocabulary& vocab;

  KbParser(const std::string& text, Vocabulary& v) : lex(text), vocab(v) {}

  static bool is_reserved(const std::string& s) {
    return s == "top" || s == "bot" || s == "exists" || s == "fragment";
  }

  void check_not_reserved(const std::string& name, const char* what) {
    if (is_reserved(name))
      throw ParseError("'" + name + "' is a reserved word, not " + what,
                       lex.line, lex.col);
  }

  // Consumes an inverse marker directly attached to the preceding name.
  bool consume_inverse_marker() {
    if (lex.pos < lex.text.size() && lex.text[lex.pos] == '-') {
      lex.advance();
      return true;
    }
    return false;
  }

  RoleExpr role_after_ident(const std::string& name) {
    check_not_reserved(name, "a role name");
    return RoleExpr{vocab.role_id(name), consume_inverse_marker()};
  }

  ConceptPtr parse_primary() {
    if (lex.try_consume("(")) {
      ConceptPtr c = parse_concept();
      lex.expect(")", "to close parenthesized concept");
      return c;
    }
    return parse_primary_from(lex.ident("a concept"));
  }

  // Continues a primary whose leading identifier has been consumed.
  ConceptPtr parse_primary_from(const std::string& id) {
    if (id == "top") return Concept::top();
    if (id == "bot") return Concept::bot();
    if (id == "exists") {
      std::string rn = lex.ident("a role name");
      RoleExpr r = role_after_ident(rn);
      lex.expect(".", "after role in existential restriction");
      ConceptPtr filler = parse_primary();
      return Concept::exists(r, filler);
    }
    check_not_reserved(id, "a concept name");
    return Concept::make_name(vocab.concept_id(id));
  }

  // Conjunction with a top conjunct simplifies to the other conjunct.
  static ConceptPtr make_conj(ConceptPtr a, ConceptPtr b) {
    if (a->kind == Concept::Kind::Top) return b;
    if (b->kind == Concept::Kind::Top) return a;
    return Concept::conj(std::move(a), std::move(b));
  }

  ConceptPtr parse_concept() {
    ConceptPtr c = parse_primary();
    while (lex.try_consume("&")) c = make_conj(c, parse_primary());
    return c;
  }

  KB parse() {
    KB kb;
    // Optional header. "fragment" must be a whole word, not an identifier
    // prefix, so check the following character too.
    lex.skip_space_and_comments();
    if (lex.text.compare(lex.pos, 8, "fragment") == 0 &&
        (lex.pos + 8 >= lex.text.size() ||
         (!std::isalnum(static_cast<unsigned char>(lex.text[lex.pos + 8])) &&
          lex.text[lex.pos + 8] != '_'))) {
      for (int i = 0; i < 8; ++i) lex.advance();
      std::string tag;
      lex.skip_space_and_comments();
      // Fragment tags may contain '-'.
      while (lex.pos < lex.text.size() &&
             (std::isalnum(static_cast<unsigned char>(lex.text[lex.pos])) ||
              lex.text[lex.pos] == '-')) {
        tag += lex.text[lex.pos];
        lex.advance();
      }
      kb.fragment = fragment_from_tag(tag);
    }
    while (!lex.eof()) parse_statement(kb);
    return kb;
  }

  void parse_statement(KB& kb) {
    int line = lex.line, col = lex.col;
    if (lex.peek() == '(') {
      ConceptPtr head = parse_primary();
      if (lex.peek() == '(') {
        // Parenthesized assertion head: (exists r.B)(a) and similar.
        kb.abox.concept_assertions.push_back({head, parse_assertion_arg()});
        return;
      }
      parse_concept_inclusion_from(head, kb);
      return;
    }
    std::string id = lex.ident("an axiom or assertion");
    if (id == "top" || id == "bot" || id == "exists") {
      parse_concept_inclusion_from(parse_primary_from(id), kb);
      return;
    }
    bool inv = consume_inverse_marker();
    if (lex.peek() == '(') {
      parse_assertion(id, inv, kb);
      return;
    }
    // Axiom with a bare name on the left. The inverse marker forces a role
    // reading; otherwise capitalization decides.
    if (!inv && is_concept_ident(id)) {
      parse_concept_inclusion_from(Concept::make_name(vocab.concept_id(id)),
                                   kb);
      return;
    }
    check_not_reserved(id, "a role name");
    RoleExpr r{vocab.role_id(id), inv};
    if (lex.try_consume("&")) {
      std::string id2 = lex.ident("a role name");
      RoleExpr s = role_after_ident(id2);
      lex.expect("<=", "in negative role inclusion");
      std::string rhs = lex.ident("'bot'");
      if (rhs != "bot")
        throw ParseError("negative role inclusions must end in 'bot'", line,
                         col);
      kb.tbox.role_disjointness.push_back({r, s});
      return;
    }
    lex.expect("<=", "in role inclusion");
    std::string id2 = lex.ident("a role name");
    RoleExpr s = role_after_ident(id2);
    kb.tbox.role_inclusions.push_back({r, s});
  }

  IndId parse_individual() {
    std::string name = lex.ident("an individual name");
    check_not_reserved(name, "an individual name");
    return vocab.ind_id(name);
  }

  IndId parse_assertion_arg() {
    lex.expect("(", "after assertion head");
    IndId a = parse_individual();
    lex.expect(")", "to close assertion");
    return a;
  }

  // Assertion with head `id` (arity decides concept vs role).
  void parse_assertion(const std::string& id, bool inv, KB& kb) {
    lex.expect("(", "after assertion head");
    IndId first = parse_individual();
    if (lex.try_consume(",")) {
      IndId second = parse_individual();
      lex.expect(")", "to close assertion");
      check_not_reserved(id, "a role name");
      // An inverse role assertion states the direct role backwards.
      if (inv) std::swap(first, second);
      kb.abox.role_assertions.push_back(
          {vocab.role_id(id), first, second});
      return;
    }
    lex.expect(")", "to close assertion");
    if (inv)
      throw ParseError("inverse marker on a concept assertion head: '" + id +
                           "-'",
                       lex.line, lex.col);
    kb.abox.concept_assertions.push_back(
        {Concept::make_name(vocab.concept_id(id)), first});
  }

  void parse_concept_inclusion_from(ConceptPtr first, KB& kb) {
    ConceptPtr lhs = first;
    while (lex.try_consume("&")) lhs = make_conj(lhs, parse_primary());
    lex.expect("<=", "in concept inclusion");
    ConceptPtr rhs = parse_concept();
    kb.tbox.concept_inclusions.push_back({lhs, rhs});
  }
};

void print_concept_rec(const Concept& c, const Vocabulary& vocab, bool paren,
                       std::ostringstream& out) {
  switch (c.kind) {
    case Concept::Kind::Top:
      out << "top";
      return;
    case Concept::Kind::Bot:
      out << "bot";
      return;
    case Concept::Kind::Name:
      out << vocab.concept_name(c.name);
      return;
    case Concept::Kind::Exists:
      out << "exists " << vocab.role_expr_name(c.role) << ".";
      if (c.lhs->kind == Concept::Kind::And ||
          c.lhs->kind == Concept::Kind::Exists) {
        out << "(";
        print_concept_rec(*c.lhs, vocab, false, out);
        out << ")";
      } else {
        print_concept_rec(*c.lhs, vocab, true, out);
      }
      return;
    case Concept::Kind::And:
      if (paren) out << "(";
      print_concept_rec(*c.lhs, vocab,
                        c.lhs->kind == Concept::Kind::And, out);
      out << " & ";
      print_concept_rec(*c.rhs, vocab, true, out);
      if (paren) out << ")";
      return;
  }
}

}  // namespace

std::string print_concept(const Concept& c, const Vocabulary& vocab) {
  std::ostringstream out;
  print_concept_rec(c, vocab, false, out);
  return out.str();
}

KB parse_kb(const std::string& text, VocabularyPtr vocab) {
  if (!vocab) vocab = std::make_shared<Vocabulary>();
  KbParser p(text, *vocab);
  KB kb = p.parse();
  kb.vocab = vocab;
  std::vector<std::string> violations = validate_fragment(kb, kb.fragment);
  if (!violations.empty())
    throw ParseError("fragment violation: " + violations.front());
  return kb;
}

std::string print_kb(const KB& kb) {
  const Vocabulary& v = *kb.vocab;
  std::ostringstream out;
  out << "fragment " << fragment_tag(kb.fragment) << "\n";
  for (const auto& ci : kb.tbox.concept_inclusions)
    out << print_concept(*ci.sub, v) << " <= " << print_concept(*ci.sup, v)
        << "\n";
  for (const auto& ri : kb.tbox.role_inclusions)
    out << v.role_expr_name(ri.sub) << " <= " << v.role_expr_name(ri.sup)
        << "\n";
  for (const auto& rd : kb.tbox.role_disjointness)
    out << v.role_expr_name(rd.r) << " & " << v.role_expr_name(rd.s)
        << " <= bot\n";
  for (const auto& ca : kb.abox.concept_assertions) {
    // Only a bare concept name can head an assertion without parentheses.
    if (ca.c->kind == Concept::Kind::Name)
      out << print_concept(*ca.c, v);
    else
      out << "(" << print_concept(*ca.c, v) << ")";
    out << "(" << v.ind_name(ca.ind) << ")\n";
  }
  for (const auto& ra : kb.abox.role_assertions)
    out << v.role_name(ra.role) << "(" << v.ind_name(ra.from) << ", "
        << v.ind_name(ra.to) << ")\n";
  return out.str();
}

namespace {

bool is_basic_dl_lite(const Concept& c) {
  if (c.kind == Concept::Kind::Name) return true;
  return c.kind == Concept::Kind::Exists &&
         c.lhs->kind == Concept::Kind::Top;
}

void scan_concept(const Concept& c, bool& has_bot, bool& has_inverse) {
  switch (c.kind) {
    case Concept::Kind::Bot:
      has_bot = true;
      return;
    case Concept::Kind::Exists:
      if (c.role.inverted) has_inverse = true;
      scan_concept(*c.lhs, has_bot, has_inverse);
      return;
    case Concept::Kind::And:
      scan_concept(*c.lhs, has_bot, has_inverse);
      scan_concept(*c.rhs, has_bot, has_inverse);
      return;
    default:
      return;
  }
}

}  // namespace

std::vector<std::string> validate_fragment(const KB& kb, Fragment f) {
  std::vector<std::string> violations;
  const Vocabulary& v = *kb.vocab;
  auto complain = [&violations](std::string msg) {
    violations.push_back(std::move(msg));
  };

  if (f == Fragment::Plain) {
    for (const auto& ci : kb.tbox.concept_inclusions)
      complain("plain graphs carry no axioms: " + print_concept(*ci.sub, v) +
               " <= " + print_concept(*ci.sup, v));
    for (const auto& ri : kb.tbox.role_inclusions)
      complain("plain graphs carry no axioms: " + v.role_expr_name(ri.sub) +
               " <= " + v.role_expr_name(ri.sup));
    for (const auto& rd : kb.tbox.role_disjointness)
      complain("plain graphs carry no axioms: " + v.role_expr_name(rd.r) +
               " & " + v.role_expr_name(rd.s) + " <= bot");
    for (const auto& ca : kb.abox.concept_assertions)
      if (ca.c->kind != Concept::Kind::Name)
        complain("plain-graph labels must be concept names: assertion on " +
                 v.ind_name(ca.ind));
    return violations;
  }

  bool allow_bot = f == Fragment::ELHIbot || f == Fragment::DLLiteR ||
                   f == Fragment::DLLiteCore;
  bool allow_inverse = f != Fragment::ELH && f != Fragment::EL;
  bool allow_role_incl = f == Fragment::ELHIbot || f == Fragment::ELHI ||
                         f == Fragment::ELH || f == Fragment::DLLiteR;
  bool dl_lite = f == Fragment::DLLiteR || f == Fragment::DLLiteCore;

  for (const auto& ci : kb.tbox.concept_inclusions) {
    bool has_bot = false, has_inverse = false;
    scan_concept(*ci.sub, has_bot, has_inverse);
    bool rhs_bot = ci.sup->kind == Concept::Kind::Bot;
    scan_concept(*ci.sup, has_bot, has_inverse);
    std::string ax = print_concept(*ci.sub, v) + " <= " +
                     print_concept(*ci.sup, v);
    if (has_bot && !allow_bot && !(rhs_bot && dl_lite))
      complain("bot not available in this fragment: " + ax);
    if (has_inverse && !allow_inverse)
      complain("inverse roles not available in this fragment: " + ax);
    if (dl_lite) {
      // B1 <= B2 or B1 & B2 <= bot, with Bi a name or unqualified exists.
      const Concept& sub = *ci.sub;
      bool ok;
      if (rhs_bot) {
        ok = is_basic_dl_lite(sub) ||
             (sub.kind == Concept::Kind::And && is_basic_dl_lite(*sub.lhs) &&
              is_basic_dl_lite(*sub.rhs));
      } else {
        ok = is_basic_dl_lite(sub) && is_basic_dl_lite(*ci.sup);
      }
      if (!ok) complain("not a DL-Lite concept inclusion: " + ax);
    }
  }
  for (const auto& ri : kb.tbox.role_inclusions) {
    if (!allow_role_incl)
      complain("role inclusions not available in this fragment: " +
               v.role_expr_name(ri.sub) + " <= " + v.role_expr_name(ri.sup));
    if (!allow_inverse && (ri.sub.inverted || ri.sup.inverted))
      complain("inverse roles not available in this fragment: " +
               v.role_expr_name(ri.sub) + " <= " + v.role_expr_name(ri.sup));
  }
  for (const auto& rd : kb.tbox.role_disjointness) {
    if (!allow_bot)
      complain("negative role inclusions not available in this fragment: " +
               v.role_expr_name(rd.r) + " & " + v.role_expr_name(rd.s) +
               " <= bot");
    if (!allow_inverse && (rd.r.inverted || rd.s.inverted))
      complain("inverse roles not available in this fragment: " +
               v.role_expr_name(rd.r) + " & " + v.role_expr_name(rd.s) +
               " <= bot");
  }
  for (const auto& ca : kb.abox.concept_assertions) {
    bool has_bot = false, has_inverse = false;
    scan_concept(*ca.c, has_bot, has_inverse);
    if (has_bot && !allow_bot)
      complain("bot not available in this fragment: assertion on " +
               v.ind_name(ca.ind));
    if (has_inverse && !allow_inverse)
      complain("inverse roles not available in this fragment: assertion on " +
               v.ind_name(ca.ind));
    if (dl_lite && ca.c->kind != Concept::Kind::Name)
      complain("DL-Lite assertions must use concept names: assertion on " +
               v.ind_name(ca.ind));
  }
  return violations;
}

}  // namespace nrpq
