#include "pegrec/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace pegrec {

namespace {

bool stands_for(const ParseTree& err, const ParseTree& node) {
  std::string_view expected = err.expected;
  std::size_t start = 0;
  while (true) {
    std::size_t cut = expected.find(" / ", start);
    if (expected.substr(start, cut == std::string_view::npos ? cut : cut - start) == node.name) return true;
    if (cut == std::string_view::npos) return false;
    start = cut + 3;
  }
}

std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(std::string s) {
  auto blank = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), blank));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), blank).base(), s.end());
  return s;
}

}  // namespace

bool ast_structural_eq(const ParseTree& a, const ParseTree& b) {
  if (a.kind == NodeKind::Error && b.kind == NodeKind::Error) return a.expected == b.expected;
  if (a.kind == NodeKind::Error) return stands_for(a, b);
  if (b.kind == NodeKind::Error) return stands_for(b, a);
  if (a.kind != b.kind || a.name != b.name || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!ast_structural_eq(a.children[i], b.children[i])) return false;
  return true;
}

std::string_view to_string(Quality q) {
  switch (q) {
    case Quality::Excellent: return "excellent";
    case Quality::NeedsReview: return "needs-review";
    case Quality::Failed: return "failed";
  }
  return "?";
}

QualityRating classify_recovery(const ParseOutcome& outcome, const ParseTree& intended) {
  QualityRating r{Quality::Failed, outcome.errors.size()};
  if (!outcome.tree) return r;
  r.quality = ast_structural_eq(*outcome.tree, intended) ? Quality::Excellent : Quality::NeedsReview;
  return r;
}

std::vector<CorpusCase> load_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a corpus directory: " + dir.string());
  std::map<std::string, CorpusCase> by_name;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".bad") continue;
    std::string name = entry.path().stem().string();
    CorpusCase c{name, entry.path(), std::nullopt, std::nullopt, std::nullopt};
    fs::path base = dir / name;
    if (fs::exists(base.string() + ".ok")) c.ok = base.string() + ".ok";
    if (fs::exists(base.string() + ".tree.json")) c.tree = base.string() + ".tree.json";
    if (auto label = read_file(base.string() + ".label")) c.expected_label = trim(*label);
    by_name.emplace(name, std::move(c));
  }
  std::vector<CorpusCase> out;
  for (auto& [_, c] : by_name) out.push_back(std::move(c));
  return out;
}

namespace {

CaseResult run_case(const Parser& parser, const CorpusCase& c, const ParseOptions& opts) {
  CaseResult res;
  res.name = c.name;
  res.expected_label = c.expected_label;

  std::optional<ParseTree> intended;
  if (c.tree) {
    auto text = read_file(*c.tree);
    if (!text) {
      res.problem = "cannot read " + c.tree->string();
      return res;
    }
    try {
      intended = tree_from_json(nlohmann::json::parse(*text));
    } catch (const std::exception& e) {
      res.problem = "bad intended tree: " + std::string(e.what());
      return res;
    }
  } else if (c.ok) {
    auto text = read_file(*c.ok);
    if (!text) {
      res.problem = "cannot read " + c.ok->string();
      return res;
    }
    ParseOutcome twin = parser.parse(*text, opts);
    if (!twin.clean()) {
      res.problem = "corrected program does not parse cleanly";
      return res;
    }
    intended = std::move(twin.tree);
  } else {
    res.problem = "no corrected program or intended tree";
    return res;
  }

  auto bad = read_file(c.bad);
  if (!bad) {
    res.problem = "cannot read " + c.bad.string();
    return res;
  }
  ParseOutcome outcome = parser.parse(*bad, opts);
  res.rating = classify_recovery(outcome, *intended);
  if (!outcome.errors.empty()) res.first_label = outcome.errors.front().label;
  res.errors = std::move(outcome.errors);
  return res;
}

}  // namespace

CorpusSummary run_corpus(const Parser& parser, const std::vector<CorpusCase>& cases, const ParseOptions& opts) {
  CorpusSummary s;
  for (const auto& c : cases) {
    CaseResult r = run_case(parser, c, opts);
    if (!r.problem.empty()) {
      ++s.problems;
    } else {
      switch (r.rating.quality) {
        case Quality::Excellent: ++s.excellent; break;
        case Quality::NeedsReview: ++s.needs_review; break;
        case Quality::Failed: ++s.failed; break;
      }
      if (r.rating.errors == 1) ++s.single_error;
      if (r.label_mismatch()) ++s.label_mismatches;
    }
    s.cases.push_back(std::move(r));
  }
  return s;
}

std::string format_summary(const CorpusSummary& s) {
  std::string out;
  char line[128];
  auto row = [&](const char* name, std::size_t n) {
    double pct = s.total() == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(s.total());
    std::snprintf(line, sizeof line, "%-14s %6zu %7.1f%%\n", name, n, pct);
    out += line;
  };
  std::snprintf(line, sizeof line, "%-14s %6s %8s\n", "category", "count", "percent");
  out += line;
  row("excellent", s.excellent);
  row("needs-review", s.needs_review);
  row("failed", s.failed);
  if (s.problems) row("broken case", s.problems);
  std::snprintf(line, sizeof line, "%-14s %6zu\n", "total", s.total());
  out += line;
  std::snprintf(line, sizeof line, "%-14s %6zu\n", "one error", s.single_error);
  out += line;
  if (s.label_mismatches) {
    std::snprintf(line, sizeof line, "%-14s %6zu\n", "label mismatch", s.label_mismatches);
    out += line;
  }
  for (const auto& c : s.cases) {
    if (!c.problem.empty()) out += "  " + c.name + ": " + c.problem + "\n";
    else if (c.label_mismatch())
      out += "  " + c.name + ": first label " + (c.first_label.empty() ? "(none)" : c.first_label) +
             ", expected " + *c.expected_label + "\n";
    else if (c.rating.quality != Quality::Excellent)
      out += "  " + c.name + ": " + std::string(to_string(c.rating.quality)) + "\n";
  }
  return out;
}

nlohmann::json summary_to_json(const CorpusSummary& s) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : s.cases) {
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& e : c.errors) errors.push_back(to_json(e));
    nlohmann::json j = {{"name", c.name},
                        {"rating", to_string(c.rating.quality)},
                        {"errors", errors},
                        {"first_label", c.first_label}};
    if (c.expected_label) j["expected_label"] = *c.expected_label;
    if (!c.problem.empty()) j["problem"] = c.problem;
    cases.push_back(std::move(j));
  }
  return {{"total", s.total()},
          {"excellent", s.excellent},
          {"needs_review", s.needs_review},
          {"failed", s.failed},
          {"single_error", s.single_error},
          {"label_mismatches", s.label_mismatches},
          {"problems", s.problems},
          {"cases", cases}};
}

}  // namespace pegrec
