#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pegrec {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

enum class NodeKind { Rule, Token, Error };

/// Concrete parse tree. Rule nodes carry the rule name, token leaves the
/// token kind, error nodes the label plus the kind(s) of the node they stand
/// in for (see describe()) and the span of the input skipped by recovery.
struct ParseTree {
  NodeKind kind = NodeKind::Rule;
  std::string name;
  std::string expected;  // Error only
  Span span;
  std::vector<ParseTree> children;

  static ParseTree rule(std::string name, Span span, std::vector<ParseTree> children = {});
  static ParseTree token(std::string kind, Span span);
  static ParseTree error(std::string label, std::string expected, Span span);

  std::size_t count(NodeKind k) const;
  bool operator==(const ParseTree&) const = default;
};

nlohmann::json to_json(const ParseTree& t);
/// Throws std::invalid_argument on objects that are not tree nodes.
ParseTree tree_from_json(const nlohmann::json& j);

struct Position {
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
  bool operator==(const Position&) const = default;
};

struct SyntaxError {
  std::string label;
  Position position;
  std::string message;
  /// Number of tokens that end at or before position.
  std::size_t token_index = 0;
};

enum class ParseStatus { Matched, Failed };

struct ParseOutcome {
  ParseStatus status = ParseStatus::Failed;
  std::size_t end = 0;          // Matched: end position of the start rule
  std::string failure_label;    // Failed: label (or "fail") that reached the top
  std::size_t failure_pos = 0;  // Failed
  std::vector<SyntaxError> errors;
  std::optional<ParseTree> tree;

  bool matched() const { return status == ParseStatus::Matched; }
  bool clean() const { return matched() && errors.empty(); }
};

nlohmann::json to_json(const SyntaxError& e);

}  // namespace pegrec
