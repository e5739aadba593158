// Copyright 2026 the nrpq authors.
// Licensed under the Apache License, Version 2.0; see LICENSE in the
// repository root.

#ifndef NRPQ_VOCAB_HPP
#define NRPQ_VOCAB_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nrpq {

// Thrown on malformed input (files, queries, CLI arguments). Carries a
// position when the source is textual.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line = 0, int col = 0)
      : std::runtime_error(format(msg, line, col)), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  static std::string format(const std::string& msg, int line, int col) {
    if (line <= 0) return msg;
    return "line " + std::to_string(line) + ":" + std::to_string(col) + ": " +
           msg;
  }
  int line_, col_;
};

// Thrown when an internal invariant is violated; the CLI maps this to a
// distinct exit code so breaches are never mistaken for bad user input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline void internal_check(bool cond, const char* msg) {
  if (!cond) throw InternalError(msg);
}

struct ConceptId {
  uint32_t v = 0;
  friend auto operator<=>(const ConceptId&, const ConceptId&) = default;
};

struct RoleId {
  uint32_t v = 0;
  friend auto operator<=>(const RoleId&, const RoleId&) = default;
};

struct IndId {
  uint32_t v = 0;
  friend auto operator<=>(const IndId&, const IndId&) = default;
};

// A role name or its inverse.
struct RoleExpr {
  RoleId name;
  bool inverted = false;
  RoleExpr inverse() const { return RoleExpr{name, !inverted}; }
  uint64_t key() const { return (uint64_t(name.v) << 1) | (inverted ? 1 : 0); }
  friend auto operator<=>(const RoleExpr&, const RoleExpr&) = default;
};

// Interning table for the three name spaces of a knowledge base. Names
// starting with "__" are reserved for machine-generated symbols; the parsers
// reject them in user input (the surface grammar cannot produce them anyway,
// since identifiers must start with a letter).
class Vocabulary {
 public:
  ConceptId concept_id(std::string_view name) {
    return ConceptId{intern(concepts_, concept_index_, name)};
  }
  RoleId role_id(std::string_view name) {
    return RoleId{intern(roles_, role_index_, name)};
  }
  IndId ind_id(std::string_view name) {
    return IndId{intern(inds_, ind_index_, name)};
  }

  std::optional<ConceptId> find_concept(std::string_view name) const {
    auto it = concept_index_.find(std::string(name));
    if (it == concept_index_.end()) return std::nullopt;
    return ConceptId{it->second};
  }
  std::optional<RoleId> find_role(std::string_view name) const {
    auto it = role_index_.find(std::string(name));
    if (it == role_index_.end()) return std::nullopt;
    return RoleId{it->second};
  }
  std::optional<IndId> find_ind(std::string_view name) const {
    auto it = ind_index_.find(std::string(name));
    if (it == ind_index_.end()) return std::nullopt;
    return IndId{it->second};
  }

  const std::string& concept_name(ConceptId c) const { return concepts_.at(c.v); }
  const std::string& role_name(RoleId r) const { return roles_.at(r.v); }
  const std::string& ind_name(IndId a) const { return inds_.at(a.v); }

  std::string role_expr_name(RoleExpr r) const {
    std::string s = role_name(r.name);
    if (r.inverted) s += '-';
    return s;
  }

  // Allocates a machine-generated concept name that cannot collide with user
  // symbols. The stem is embedded for debuggability.
  ConceptId fresh_concept(std::string_view stem) {
    return concept_id(fresh_name(stem, concept_index_));
  }
  RoleId fresh_role(std::string_view stem) {
    return role_id(fresh_name(stem, role_index_));
  }

  size_t num_concepts() const { return concepts_.size(); }
  size_t num_roles() const { return roles_.size(); }
  size_t num_inds() const { return inds_.size(); }

 private:
  static uint32_t intern(std::vector<std::string>& names,
                         std::unordered_map<std::string, uint32_t>& index,
                         std::string_view name) {
    auto it = index.find(std::string(name));
    if (it != index.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(names.size());
    names.emplace_back(name);
    index.emplace(std::string(name), id);
    return id;
  }

  std::string fresh_name(
      std::string_view stem,
      const std::unordered_map<std::string, uint32_t>& index) {
    for (;;) {
      std::string candidate =
          "__" + std::string(stem) + std::to_string(fresh_counter_++);
      if (!index.count(candidate)) return candidate;
    }
  }

  std::vector<std::string> concepts_, roles_, inds_;
  std::unordered_map<std::string, uint32_t> concept_index_, role_index_,
      ind_index_;
  uint64_t fresh_counter_ = 0;
};

using VocabularyPtr = std::shared_ptr<Vocabulary>;

// Sorted, duplicate-free set of concept names; the empty set denotes top.
// Used both as a conjunction of concept names and as a derived type.
using ConceptSet = std::vector<ConceptId>;

inline bool set_contains(const ConceptSet& s, ConceptId c) {
  auto it = std::lower_bound(s.begin(), s.end(), c);
  return it != s.end() && *it == c;
}

inline bool set_insert(ConceptSet& s, ConceptId c) {
  auto it = std::lower_bound(s.begin(), s.end(), c);
  if (it != s.end() && *it == c) return false;
  s.insert(it, c);
  return true;
}

inline bool set_includes(const ConceptSet& big, const ConceptSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline ConceptSet set_union(const ConceptSet& a, const ConceptSet& b) {
  ConceptSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline ConceptSet make_set(std::initializer_list<ConceptId> xs) {
  ConceptSet s(xs);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace nrpq

template <>
struct std::hash<nrpq::ConceptId> {
  size_t operator()(nrpq::ConceptId c) const noexcept {
    return std::hash<uint32_t>()(c.v);
  }
};
template <>
struct std::hash<nrpq::RoleId> {
  size_t operator()(nrpq::RoleId r) const noexcept {
    return std::hash<uint32_t>()(r.v);
  }
};
template <>
struct std::hash<nrpq::IndId> {
  size_t operator()(nrpq::IndId a) const noexcept {
    return std::hash<uint32_t>()(a.v);
  }
};
template <>
struct std::hash<nrpq::RoleExpr> {
  size_t operator()(nrpq::RoleExpr r) const noexcept {
    return std::hash<uint64_t>()(r.key());
  }
};

#endif  // NRPQ_VOCAB_HPP
