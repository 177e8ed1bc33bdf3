#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pegrec/grammar.hpp"
#include "pegrec/lexer.hpp"
#include "pegrec/parse_tree.hpp"

namespace pegrec {

/// An annotation site p / ^l that matched without recovery, recorded when
/// ParseOptions::site_trace is set. Backtracked matches are not reported.
struct SiteHit {
  std::string label;
  Span span;
  std::size_t tokens = 0;
};

struct ParseOptions {
  std::size_t max_errors = 50;
  /// When false, recovery expressions are ignored and the first labeled
  /// failure aborts the parse.
  bool use_recovery = true;
  std::vector<SiteHit>* site_trace = nullptr;
};

/// Result of matching one expression. `label` is empty on success and
/// "fail" for an ordinary (backtrackable) failure.
struct MatchResult {
  bool ok = false;
  std::size_t pos = 0;
  std::string label;

  bool failed_plain() const { return !ok && label == kFail; }
};

/// Interpreter for labeled PEGs with recovery. Construction desugars the
/// grammar and compiles the lexical rules; a Parser is immutable afterwards
/// and parse() may be called concurrently.
class Parser {
 public:
  explicit Parser(const Grammar& g);
  ~Parser();
  Parser(Parser&&) noexcept;
  Parser& operator=(Parser&&) noexcept;

  /// The desugared grammar the parser runs.
  const Grammar& grammar() const;

  /// Parses the whole input from the start rule.
  ParseOutcome parse(std::string_view input, const ParseOptions& opts = {}) const;

  /// Matches e (a core expression over this grammar's rules) at pos.
  MatchResult match(const Expr& e, std::string_view input, std::size_t pos = 0,
                    const ParseOptions& opts = {}) const;

  /// All tokens of input up to end of input.
  std::vector<Token> tokenize(std::string_view input) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pegrec
