#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pegrec/engine.hpp"
#include "pegrec/parse_tree.hpp"

namespace pegrec {

/// Compares tree shape: rule names, token kinds and child order. Spans and
/// token text are ignored. An error node matches any single node whose rule
/// or token kind is one of the kinds it stands in for; two error nodes match
/// when they stand in for the same kinds.
bool ast_structural_eq(const ParseTree& a, const ParseTree& b);

enum class Quality { Excellent, NeedsReview, Failed };

std::string_view to_string(Quality q);

struct QualityRating {
  Quality quality = Quality::Failed;
  std::size_t errors = 0;
};

QualityRating classify_recovery(const ParseOutcome& outcome, const ParseTree& intended);

/// One corpus entry: <name>.bad plus <name>.ok (corrected program) or
/// <name>.tree.json (intended tree), and optionally <name>.label holding the
/// label the first error must carry.
struct CorpusCase {
  std::string name;
  std::filesystem::path bad;
  std::optional<std::filesystem::path> ok;
  std::optional<std::filesystem::path> tree;
  std::optional<std::string> expected_label;
};

/// Cases sorted by name. Throws std::runtime_error if dir is not a directory.
std::vector<CorpusCase> load_corpus(const std::filesystem::path& dir);

struct CaseResult {
  std::string name;
  QualityRating rating;
  std::string first_label;              // empty when the parse reported nothing
  std::optional<std::string> expected_label;
  std::string problem;                  // unreadable files, unparsable twin
  std::vector<SyntaxError> errors;

  bool label_mismatch() const { return expected_label && *expected_label != first_label; }
};

struct CorpusSummary {
  std::vector<CaseResult> cases;
  std::size_t excellent = 0;
  std::size_t needs_review = 0;
  std::size_t failed = 0;
  std::size_t single_error = 0;
  std::size_t label_mismatches = 0;
  std::size_t problems = 0;

  std::size_t total() const { return cases.size(); }
  /// Nonzero iff any case failed, broke, or reported an unexpected first label.
  int exit_status() const { return failed + label_mismatches + problems == 0 ? 0 : 1; }
};

CorpusSummary run_corpus(const Parser& parser, const std::vector<CorpusCase>& cases,
                         const ParseOptions& opts = {});

/// Fixed-width table: category, count, percentage.
std::string format_summary(const CorpusSummary& s);
nlohmann::json summary_to_json(const CorpusSummary& s);

}  // namespace pegrec
