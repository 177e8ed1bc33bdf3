#include "pegrec/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace pegrec {

bool TokenSet::merge(const TokenSet& other) {
  std::size_t before = kinds_.size();
  bool had_epsilon = epsilon_;
  kinds_.insert(other.kinds_.begin(), other.kinds_.end());
  epsilon_ = epsilon_ || other.epsilon_;
  return kinds_.size() != before || epsilon_ != had_epsilon;
}

bool TokenSet::intersects(const TokenSet& other) const {
  const auto& small = kinds_.size() <= other.kinds_.size() ? kinds_ : other.kinds_;
  const auto& large = kinds_.size() <= other.kinds_.size() ? other.kinds_ : kinds_;
  return std::any_of(small.begin(), small.end(), [&](const std::string& k) { return large.count(k) != 0; });
}

std::vector<std::string> ordered_kinds(const Grammar& g, const TokenSet& s) {
  std::vector<std::string> out;
  for (const auto& kind : g.token_kinds())
    if (s.contains(kind)) out.push_back(kind);
  // Kinds the grammar does not declare (only possible for hand-built sets).
  for (const auto& kind : s.kinds())
    if (kind != kEof && std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
  if (s.contains(std::string(kEof))) out.emplace_back(kEof);
  return out;
}

std::string to_string(const Grammar& g, const TokenSet& s) {
  std::string out = "{";
  for (const auto& kind : ordered_kinds(g, s)) {
    if (out.size() > 1) out += ", ";
    out += kind;
  }
  if (s.has_epsilon()) out += out.size() > 1 ? ", ε" : "ε";
  return out + "}";
}

SetAnalysis::SetAnalysis(const Grammar& g) {
  for (const auto& kind : g.token_kinds()) all_tokens_.insert(kind);
  for (const auto& r : g.syntactic) first_[r.name] = TokenSet{};

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.syntactic) changed = first_[r.name].merge(first(*r.body)) || changed;
  }

  for (const auto& r : g.syntactic) follow_[r.name] = TokenSet{};
  follow_[g.start].insert(std::string(kEof));
  changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.syntactic) {
      TokenSet flw = follow_[r.name];
      changed = visit_follow(*r.body, flw) || changed;
    }
  }
}

TokenSet SetAnalysis::first(const Expr& e) const {
  switch (e.op) {
    case Op::Empty:
    case Op::Not:
    case Op::And:
      return TokenSet::epsilon_only();
    case Op::Terminal:
      return TokenSet{e.name};
    case Op::NonTerminal: {
      auto it = first_.find(e.name);
      return it == first_.end() ? TokenSet{} : it->second;
    }
    case Op::Sequence: {
      TokenSet left = first(e.kid(0));
      if (!left.has_epsilon()) return left;
      TokenSet out = left.without_epsilon();
      out.merge(first(e.kid(1)));
      return out;
    }
    case Op::Choice: {
      TokenSet out = first(e.kid(0));
      out.merge(first(e.kid(1)));
      return out;
    }
    case Op::Star:
    case Op::Optional: {
      TokenSet out = first(e.kid());
      out.set_epsilon(true);
      return out;
    }
    case Op::Plus:
    case Op::Annotated:
      return first(e.kid());
    case Op::Throw:
      return TokenSet{};
    case Op::AnyToken:
      return all_tokens_;
    case Op::Literal:
    case Op::CharClass:
      break;
  }
  throw std::logic_error("FIRST of a character-level expression");
}

const TokenSet& SetAnalysis::first_of_rule(const std::string& rule) const {
  auto it = first_.find(rule);
  if (it == first_.end()) throw std::out_of_range("unknown rule " + rule);
  return it->second;
}

const TokenSet& SetAnalysis::follow(const std::string& rule) const {
  auto it = follow_.find(rule);
  if (it == follow_.end()) throw std::out_of_range("unknown rule " + rule);
  return it->second;
}

TokenSet SetAnalysis::calck(const Expr& e, const TokenSet& flw) const {
  TokenSet f = first(e);
  if (!f.has_epsilon()) return f;
  TokenSet out = f.without_epsilon();
  out.merge(flw.without_epsilon());
  return out;
}

bool SetAnalysis::visit_follow(const Expr& e, const TokenSet& flw) {
  switch (e.op) {
    case Op::Sequence: {
      bool changed = visit_follow(e.kid(0), calck(e.kid(1), flw));
      return visit_follow(e.kid(1), flw) || changed;
    }
    case Op::Choice: {
      bool changed = visit_follow(e.kid(0), flw);
      return visit_follow(e.kid(1), flw) || changed;
    }
    case Op::Star:
    case Op::Plus: {
      TokenSet inner = first(e.kid()).without_epsilon();
      inner.merge(flw);
      return visit_follow(e.kid(), inner);
    }
    case Op::Optional:
    case Op::Annotated:
      return visit_follow(e.kid(), flw);
    case Op::NonTerminal: {
      auto it = follow_.find(e.name);
      return it != follow_.end() && it->second.merge(flw.without_epsilon());
    }
    default:
      return false;
  }
}

TokenSet first(const Grammar& desugared, const Expr& e) { return SetAnalysis(desugared).first(e); }

std::map<std::string, TokenSet> follow(const Grammar& desugared) {
  return SetAnalysis(desugared).follow_sets();
}

}  // namespace pegrec
