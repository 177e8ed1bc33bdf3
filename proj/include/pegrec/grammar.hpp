#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pegrec/expr.hpp"

namespace pegrec {

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Error raised for malformed or invalid grammars. what() reads
/// "<line>:<col>: <message>" when a location is known.
class GrammarError : public std::runtime_error {
 public:
  GrammarError(std::string message, std::optional<SourcePos> where = std::nullopt);

  const std::string& message() const { return message_; }
  const std::optional<SourcePos>& where() const { return where_; }

 private:
  std::string message_;
  std::optional<SourcePos> where_;
};

struct Rule {
  std::string name;
  ExprPtr body;
  SourcePos pos;
};

/// Rule names of two or more characters spelled in ALL-CAPS (digits and '_'
/// allowed) are lexical token kinds; all others are syntactic.
bool is_lexical_name(std::string_view name);

/// A labeled PEG: syntactic rules over tokens, lexical rules over characters,
/// a start rule, the label set, recovery expressions and messages.
struct Grammar {
  std::vector<Rule> syntactic;
  std::vector<Rule> lexical;
  std::string start;
  /// Labels in first-appearance order.
  std::vector<std::string> labels;
  std::map<std::string, ExprPtr> recovery;
  std::map<std::string, std::string> messages;

  const Rule* find_syntactic(std::string_view name) const;
  const Rule* find_lexical(std::string_view name) const;
  Rule* find_syntactic(std::string_view name);
  bool has_label(std::string_view label) const;
  void add_label(const std::string& label);

  /// Token kinds in declaration order: lexical rules, then anonymous literal
  /// kinds by first appearance (syntactic rules, then recovery expressions).
  std::vector<std::string> token_kinds() const;
  /// Anonymous literal kinds by first appearance.
  std::vector<std::string> literal_kinds() const;
};

/// Parses grammar DSL text and validates it. Sugar is kept intact.
Grammar parse_grammar(std::string_view text);

/// Checks the structural invariants; throws GrammarError on the first
/// violation. Also recomputes the label set from the thrown labels.
void validate(Grammar& g);

/// Replaces sugar with core constructors in every rule and recovery
/// expression. Annotated(p, l) becomes p / ^l with the throw carrying
/// describe(p).
Grammar desugar(const Grammar& g);
ExprPtr desugar(const ExprPtr& e);

/// Canonical DSL rendering; annotation sugar is re-introduced for p / ^l.
std::string serialize_grammar(const Grammar& g);

/// Rule-by-rule structural equality (see equivalent()), including start and
/// recovery map.
bool structurally_equal(const Grammar& a, const Grammar& b);

/// Visits every node of e in pre-order.
template <typename F>
void for_each_node(const Expr& e, F&& f) {
  f(e);
  for (const auto& k : e.kids) for_each_node(*k, f);
}

}  // namespace pegrec
