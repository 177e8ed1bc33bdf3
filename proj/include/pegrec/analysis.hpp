#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pegrec/grammar.hpp"

namespace pegrec {

/// A set of token kinds plus an ε flag. The synthetic end-of-input kind is
/// stored as kEof among the kinds.
class TokenSet {
 public:
  TokenSet() = default;
  TokenSet(std::initializer_list<std::string> kinds, bool epsilon = false)
      : kinds_(kinds), epsilon_(epsilon) {}

  static TokenSet epsilon_only() {
    TokenSet s;
    s.epsilon_ = true;
    return s;
  }

  bool has_epsilon() const { return epsilon_; }
  void set_epsilon(bool on) { epsilon_ = on; }
  bool contains(const std::string& kind) const { return kinds_.count(kind) != 0; }
  bool empty() const { return kinds_.empty() && !epsilon_; }
  const std::set<std::string>& kinds() const { return kinds_; }

  void insert(const std::string& kind) { kinds_.insert(kind); }
  /// Union; returns true if this set grew.
  bool merge(const TokenSet& other);
  TokenSet without_epsilon() const { return TokenSet(kinds_, false); }
  /// Intersection of the token kinds (ε ignored).
  bool intersects(const TokenSet& other) const;

  bool operator==(const TokenSet&) const = default;

 private:
  TokenSet(std::set<std::string> kinds, bool epsilon) : kinds_(std::move(kinds)), epsilon_(epsilon) {}

  std::set<std::string> kinds_;
  bool epsilon_ = false;
};

/// Kinds of s in grammar declaration order, EOF last (ε not included).
std::vector<std::string> ordered_kinds(const Grammar& g, const TokenSet& s);
/// Human-readable rendering "{A, B, EOF, ε}" in declaration order.
std::string to_string(const Grammar& g, const TokenSet& s);

/// FIRST, FOLLOW and nullability for a desugared, validated grammar. Both
/// fixed points are computed once at construction; queries are const and
/// safe to share between threads afterwards.
class SetAnalysis {
 public:
  explicit SetAnalysis(const Grammar& desugared);

  TokenSet first(const Expr& e) const;
  const TokenSet& first_of_rule(const std::string& rule) const;
  const TokenSet& follow(const std::string& rule) const;
  const std::map<std::string, TokenSet>& follow_sets() const { return follow_; }
  bool nullable(const Expr& e) const { return first(e).has_epsilon(); }

  /// FIRST(e) with ε replaced by flw.
  TokenSet calck(const Expr& e, const TokenSet& flw) const;

 private:
  bool visit_follow(const Expr& e, const TokenSet& flw);

  TokenSet all_tokens_;
  std::map<std::string, TokenSet> first_;
  std::map<std::string, TokenSet> follow_;
};

/// Convenience wrappers computing the analysis on the fly.
TokenSet first(const Grammar& desugared, const Expr& e);
std::map<std::string, TokenSet> follow(const Grammar& desugared);

}  // namespace pegrec
