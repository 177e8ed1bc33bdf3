#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pegrec/analysis.hpp"
#include "pegrec/grammar.hpp"

namespace pegrec {

struct AnnotatorConfig {
  /// Keep labels already in the grammar (and give the ones without a
  /// recovery expression a synthesized one) instead of stripping them.
  bool preserve_existing = false;
  /// Rules whose repetitions signal an error when neither the body nor the
  /// follow set matches.
  std::set<std::string> star_mode_rules;
  std::string label_prefix = "Err";
};

enum class SkipReason { NonDisjointChoice, Nullable, FirstPosition, RepetitionOverlap };

std::string_view to_string(SkipReason reason);

/// Site paths are dotted child indices into the core (binary) expression
/// tree of the rule, "" being the rule body itself.
struct InsertedSite {
  std::string rule;
  std::string path;
  std::string label;
  std::string expected;
  std::string site;  // rendered site expression
  TokenSet recovery_set;
  bool star_mode = false;
  // Directly preceded by a repetition within its sequence. Deleting the
  // guarded token there can be absorbed by the repetition.
  bool follows_repetition = false;
};

struct SkippedSite {
  std::string rule;
  std::string path;
  std::string site;
  SkipReason reason;
};

struct AnnotationReport {
  std::vector<InsertedSite> inserted;
  std::vector<SkippedSite> skipped;
  /// Pre-existing labels that received a synthesized recovery expression.
  std::vector<InsertedSite> recovery_added;
  std::vector<std::string> notes;

  const InsertedSite* find(std::string_view label) const;
};

struct Annotation {
  Grammar grammar;
  AnnotationReport report;
};

/// Inserts labels at the sites where failure cannot be recovered by
/// backtracking and synthesizes a (!follow .)* recovery expression and a
/// default message for each. Accepts sugared grammars (desugars first).
/// Throws GrammarError if a star-mode rule is not defined.
Annotation annotate(const Grammar& g, const AnnotatorConfig& cfg = {});

/// annotate() with the repetition variant enabled for `rules`.
Annotation annotate_star_mode(const Grammar& g, const std::set<std::string>& rules, AnnotatorConfig cfg = {});

/// (!S .)* with S rendered as an ordered choice of token kinds in declaration
/// order.
ExprPtr skip_until(const Grammar& g, const TokenSet& stop);

nlohmann::json report_to_json(const Grammar& g, const AnnotationReport& report);

}  // namespace pegrec
