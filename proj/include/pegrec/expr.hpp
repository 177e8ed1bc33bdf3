#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pegrec {

/// Constructors of a parsing expression.
///
/// The first nine (Empty .. AnyToken) form the core language the engine and
/// the analyses work on. Annotated, Optional, Plus and And are surface sugar
/// removed by desugar(). Literal and CharClass only occur inside lexical rules,
/// where expressions range over characters instead of tokens.
enum class Op {
  Empty,
  Terminal,     // name = token kind
  NonTerminal,  // name = rule name
  Sequence,     // kids = {left, right}
  Choice,       // kids = {first, second}
  Star,
  Not,
  Throw,        // name = label
  AnyToken,     // '.': any token (syntactic) or any character (lexical)
  Annotated,    // [p]^label, name = label
  Optional,
  Plus,
  And,
  Literal,      // name = literal text (lexical rules)
  CharClass,    // ranges / negated (lexical rules)
};

struct CharRange {
  char32_t lo;
  char32_t hi;
  bool operator==(const CharRange&) const = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::Empty;
  std::string name;
  // Throw nodes produced from [p]^l carry a description of p ("RPAR", "Exp",
  // "IF / WHILE"); it names the kind of dummy node built on recovery.
  std::string expected;
  std::vector<ExprPtr> kids;
  std::vector<CharRange> ranges;
  bool negated = false;

  const Expr& kid(std::size_t i = 0) const { return *kids[i]; }
};

ExprPtr empty();
ExprPtr terminal(std::string kind);
ExprPtr nonterminal(std::string rule);
ExprPtr seq(ExprPtr left, ExprPtr right);
/// Right-nested sequence; an empty list gives Empty.
ExprPtr seq(std::vector<ExprPtr> items);
ExprPtr choice(ExprPtr first, ExprPtr second);
/// Right-nested ordered choice; the list must be non-empty.
ExprPtr choice(std::vector<ExprPtr> alternatives);
ExprPtr star(ExprPtr body);
ExprPtr not_(ExprPtr body);
ExprPtr throw_(std::string label, std::string expected = {});
ExprPtr any();
ExprPtr annotated(ExprPtr body, std::string label);
ExprPtr optional(ExprPtr body);
ExprPtr plus(ExprPtr body);
ExprPtr and_(ExprPtr body);
ExprPtr literal(std::string text);
ExprPtr char_class(std::vector<CharRange> ranges, bool negated = false);

/// Canonical name of the anonymous token kind an inline literal defines.
std::string literal_kind(std::string_view text);
/// True for kinds produced by literal_kind().
bool is_literal_kind(std::string_view kind);
/// Inverse of literal_kind().
std::string literal_text(std::string_view kind);

/// Reserved token kind for end of input.
inline constexpr std::string_view kEof = "EOF";
/// Reserved backtracking failure label.
inline constexpr std::string_view kFail = "fail";

/// True if e is p / ^l, the desugared form of an annotation.
bool is_annotation_site(const Expr& e);

/// Structural equality. Annotated(p, l) and Choice(p, Throw(l)) are treated as
/// the same expression; Throw descriptions are ignored.
bool equivalent(const Expr& a, const Expr& b);

/// Core-only description of e used for dummy nodes: kind or rule name for a
/// single symbol, " / "-joined alternatives for a choice of symbols, otherwise
/// the rendered expression.
std::string describe(const Expr& e);

/// Renders e in the grammar DSL (canonical form, minimal parentheses).
std::string to_string(const Expr& e);

}  // namespace pegrec
