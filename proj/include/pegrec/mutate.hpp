#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pegrec/annotator.hpp"
#include "pegrec/engine.hpp"

namespace pegrec {

struct Mutant {
  std::string text;
  /// Label guarding the deleted token; empty for random mutants.
  std::string label;
  Span removed;
  std::string description;
};

struct DeletionOptions {
  /// Keep only mutants whose error is detectable where the token went
  /// missing, i.e. a parse without recovery stops right there. Otherwise the
  /// next token continues the parse (a repetition absorbing the statements
  /// after a deleted '}', or '==' extending the expression in front of a
  /// deleted ')') and the error surfaces later under another label.
  bool require_local_detection = true;
};

/// One mutant per labeled site that matched exactly one token while parsing
/// `program`: the token is replaced by a space. `program` must parse cleanly.
std::vector<Mutant> labeled_deletions(const Parser& annotated, std::string_view program,
                                      const DeletionOptions& opts = {});

/// Deletes or duplicates one token at a uniformly chosen position. Returns
/// nullopt for programs without tokens.
std::optional<Mutant> random_mutant(const Parser& parser, std::string_view program, std::uint64_t seed);

}  // namespace pegrec
