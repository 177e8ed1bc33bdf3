#pragma once

#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pegrec/grammar.hpp"
#include "pegrec/parse_tree.hpp"

namespace pegrec {

/// Token kind given to a character that no lexical rule matches.
inline constexpr std::string_view kUnknownToken = "<char>";

struct Token {
  std::string_view kind;  // kEof at end of input, kUnknownToken for garbage
  Span span;
};

/// Compiled lexical rules of a grammar: inline literal kinds first (by first
/// appearance), then named lexical rules in declaration order. Longest match
/// wins; ties go to the earlier entry.
class TokenRules {
 public:
  explicit TokenRules(const Grammar& desugared);

  /// Longest token starting exactly at offset, or nullopt.
  std::optional<Token> longest_match(std::string_view text, std::size_t offset) const;

 private:
  struct Entry {
    std::string kind;
    std::string literal;        // for inline literal kinds
    const Expr* pattern = nullptr;  // for lexical rules
  };

  std::optional<std::size_t> match_chars(const Expr& e, std::string_view text, std::size_t pos) const;

  std::vector<Entry> entries_;
  std::unordered_map<std::string, const Expr*> rules_;
  std::vector<ExprPtr> keep_alive_;
};

/// On-demand tokenizer over one input. Whitespace and // comments are skipped
/// before each token. Results are memoized by start offset.
class Lexer {
 public:
  Lexer(const TokenRules& rules, std::string_view text);

  std::size_t skip_trivia(std::size_t offset) const;
  /// First token at or after offset.
  const Token& next(std::size_t offset);
  /// Number of tokens ending at or before offset.
  std::size_t tokens_before(std::size_t offset);
  Position position(std::size_t offset) const;
  std::string_view text() const { return text_; }
  std::string_view spelling(const Token& t) const { return text_.substr(t.span.begin, t.span.end - t.span.begin); }

 private:
  const TokenRules& rules_;
  std::string_view text_;
  std::vector<std::size_t> line_starts_;
  std::unordered_map<std::size_t, Token> memo_;
};

}  // namespace pegrec
