// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pegrec/analysis.hpp"
#include "pegrec/annotator.hpp"
#include "pegrec/diagnostics.hpp"
#include "pegrec/engine.hpp"
#include "pegrec/evaluator.hpp"
#include "pegrec/mutate.hpp"

using namespace pegrec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  // Records a failed expectation; returns cond.
  bool expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "; ";
      ok = false;
      detail << what << "; ";
    }
    return cond;
  }
};

int failures = 0;

void report(const std::string& id, const std::string& title, const Check& c, const std::string& summary) {
  std::cout << (c.ok ? "PASS " : "FAIL ") << id << " " << title << ": " << summary;
  if (!c.ok) std::cout << " " << c.detail.str();
  std::cout << std::endl;
  if (!c.ok) ++failures;
}

std::set<std::string> stop_set(const Expr& rec) {
  std::set<std::string> out;
  if (rec.op != Op::Star || rec.kid().op != Op::Sequence || rec.kid().kid(0).op != Op::Not ||
      rec.kid().kid(1).op != Op::AnyToken)
    return {"<not a (!S .)* loop>"};
  for_each_node(rec.kid().kid(0).kid(), [&](const Expr& e) {
    if (e.op == Op::Terminal) out.insert(e.name);
  });
  return out;
}

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& k : s) out += (out.empty() ? "" : ", ") + k;
  return "{" + out + "}";
}

std::size_t count_sites(const Expr& root) {
  std::size_t n = 0;
  for_each_node(root, [&](const Expr& e) { n += is_annotation_site(e) ? 1 : 0; });
  return n;
}

// Rule body with every label name replaced by a placeholder, so that two
// grammars can be compared by site position alone.
std::string positional(const Grammar& desugared, const std::string& rule) {
  static const std::regex label(R"(\]\^[A-Za-z_][A-Za-z0-9_]*)");
  return std::regex_replace(to_string(*desugared.find_syntactic(rule)->body), label, "]^_");
}

// 1. Annotating the unlabeled grammar places labels exactly where the
// hand-labeled grammar has them.
void fig2_reproduction() {
  auto t0 = Clock::now();
  Check c;
  Grammar input = fixtures::tiny_java();
  Annotation a = annotate(input);
  Grammar produced = desugar(parse_grammar(serialize_grammar(a.grammar)));
  Grammar expected = desugar(fixtures::tiny_java_labeled());
  std::size_t sites = 0;
  c.expect(produced.syntactic.size() == expected.syntactic.size(), "rule count differs");
  for (const auto& r : expected.syntactic) {
    if (!produced.find_syntactic(r.name)) {
      c.expect(false, "missing rule " + r.name);
      continue;
    }
    std::string want = positional(expected, r.name), got = positional(produced, r.name);
    c.expect(want == got, r.name + ": expected `" + want + "` got `" + got + "`");
    if (r.name != "Prog") sites += count_sites(*produced.find_syntactic(r.name)->body);
  }
  c.expect(sites == 25, "label sites outside Prog: " + std::to_string(sites));
  const Expr& if_body = *produced.find_syntactic("IfStmt")->body;
  bool else_labeled = false;
  for_each_node(if_body, [&](const Expr& e) {
    if (e.op == Op::Sequence && e.kid(0).op == Op::Terminal && e.kid(0).name == "ELSE" &&
        is_annotation_site(e.kid(1)))
      else_labeled = true;
  });
  c.expect(!else_labeled, "Stmt after ELSE is labeled");
  double secs = seconds_since(t0);
  c.expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu sites outside Prog, %zu in total, else-branch unlabeled, %.3f s", sites,
                a.report.inserted.size(), secs);
  report("AC1", "labels at the hand-labeled sites", c, buf);
}

// 2. The recovery expression of the label guarding ')' in WhileStmt skips to
// FIRST(Stmt).
void rpw_recovery_set() {
  Check c;
  Annotation a = annotate(fixtures::tiny_java());
  const InsertedSite* site = nullptr;
  for (const auto& s : a.report.inserted)
    if (s.rule == "WhileStmt" && s.site == "RPAR") site = &s;
  std::set<std::string> want{"IF", "WHILE", "PRINTLN", "INT", "NAME", "LCUR"};
  std::set<std::string> got;
  if (c.expect(site != nullptr, "no label on RPAR in WhileStmt")) {
    got = stop_set(*a.grammar.recovery.at(site->label));
    c.expect(got == want, "stop set " + join(got));
    SetAnalysis sets(desugar(a.grammar));
    const auto& first = sets.first_of_rule("Stmt").kinds();
    c.expect(got == std::set<std::string>(first.begin(), first.end()), "stop set differs from computed FIRST(Stmt)");
  }
  report("AC2", "recovery set for ')' in while", c,
         (site ? site->label : std::string("?")) + " <- (!S .)*, S = " + join(got));
}

// 3. The factorial program with a missing ')' and a missing ';'.
void fig3_replay() {
  Check c;
  std::string program = fixtures::data("factorial.java");

  Grammar labeled = fixtures::tiny_java_labeled();
  install_messages(labeled, parse_messages(fixtures::data("fig3_messages.json"), labeled));
  ParseOutcome plain = Parser(labeled).parse(program);
  std::string line = plain.errors.empty() ? "" : format_error("factorial.java", plain.errors[0]);
  c.expect(plain.errors.size() == 1, "(a) " + std::to_string(plain.errors.size()) + " errors");
  c.expect(line == "factorial.java:5: syntax error, missing ')' in while", "(a) got `" + line + "`");

  Annotation a = annotate(fixtures::tiny_java());
  ParseOutcome rec = Parser(a.grammar).parse(program);
  std::size_t nodes = rec.tree ? rec.tree->count(NodeKind::Error) : 0;
  c.expect(rec.errors.size() == 2, "(b) " + std::to_string(rec.errors.size()) + " errors");
  if (rec.errors.size() == 2) {
    c.expect(rec.errors[0].position.line == 5, "(b) first error on line " + std::to_string(rec.errors[0].position.line));
    c.expect(rec.errors[1].position.line == 7, "(b) second error on line " + std::to_string(rec.errors[1].position.line));
    const InsertedSite* second = a.report.find(rec.errors[1].label);
    c.expect(second && second->site == "SEMI", "(b) second error is not the missing ';'");
  }
  c.expect(rec.matched() && rec.tree.has_value(), "(b) no complete tree");
  c.expect(nodes == 2, "(b) " + std::to_string(nodes) + " error nodes");

  std::string summary = "(a) `" + line + "`; (b) " + std::to_string(rec.errors.size()) + " errors";
  for (const auto& e : rec.errors) summary += " [line " + std::to_string(e.position.line) + " " + e.label + "]";
  summary += ", " + std::to_string(nodes) + " error nodes";
  report("AC3", "factorial replay", c, summary);
}

// 4. Annotation does not change what valid programs parse to.
void language_preservation() {
  Check c;
  Grammar g = fixtures::tiny_java();
  Parser plain(g);
  Parser labeled(annotate(g).grammar);
  std::mt19937_64 rng(2024);
  int bad = 0;
  std::size_t tokens = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string program = oracle::random_tiny_java(rng, 4);
    ParseOutcome a = plain.parse(program), b = labeled.parse(program);
    tokens += plain.tokenize(program).size();
    bool same = a.clean() && b.clean() && ast_structural_eq(*a.tree, *b.tree) && *a.tree == *b.tree;
    if (!same && bad++ == 0) c.expect(false, "first failure:\n" + program);
  }
  c.expect(bad == 0, std::to_string(bad) + " programs differ");
  report("AC4", "language preservation", c,
         "1000 random programs (" + std::to_string(tokens / 1000) + " tokens on average), " + std::to_string(bad) +
             " failures");
}

std::size_t tokens_in(std::size_t byte_end) { return byte_end == 0 ? 0 : (byte_end + 1) / 2; }

// 5. FIRST soundness on random grammars.
void first_soundness() {
  Check c;
  std::mt19937_64 rng(55);
  auto inputs = oracle::all_inputs({"'a'", "'b'", "'c'"}, 6);
  std::size_t checks = 0, violations = 0;
  for (int i = 0; i < 20; ++i) {
    Grammar g = desugar(oracle::random_grammar(rng, 5, 3));
    Parser p(g);
    SetAnalysis sets(g);
    std::vector<const Expr*> exprs;
    for (const auto& r : p.grammar().syntactic)
      for_each_node(*r.body, [&](const Expr& e) { exprs.push_back(&e); });
    for (const auto& in : inputs) {
      std::string text = oracle::render_literals(in);
      for (const Expr* e : exprs) {
        MatchResult m = p.match(*e, text);
        if (!m.ok) continue;
        ++checks;
        TokenSet f = sets.first(*e);
        bool sound = tokens_in(m.pos) == 0 ? f.has_epsilon() : f.contains(in[0]);
        if (!sound && violations++ == 0)
          c.expect(false, "`" + to_string(*e) + "` on `" + text + "` FIRST " + to_string(g, f));
      }
    }
  }
  c.expect(violations == 0, std::to_string(violations) + " violations");
  report("AC5", "FIRST soundness", c,
         "20 grammars, inputs up to 6 tokens, " + std::to_string(checks) + " successful matches checked, " +
             std::to_string(violations) + " violations");
}

// 6. The engine agrees with the naive recognizer on label-free grammars.
void engine_oracle() {
  auto t0 = Clock::now();
  Check c;
  std::mt19937_64 rng(66);
  auto inputs = oracle::all_inputs({"'a'", "'b'", "'c'"}, 8);
  const int grammars = 20;
  std::size_t compared = 0, disagreements = 0;
  for (int i = 0; i < grammars; ++i) {
    Grammar g = oracle::random_grammar(rng, 5, 3);
    Parser p(g);
    oracle::NaiveRecognizer naive(g);
    for (const auto& in : inputs) {
      std::string text = oracle::render_literals(in);
      auto want = naive.run_rule(g.start, in);
      ParseOutcome out = p.parse(text);
      MatchResult m = p.match(*nonterminal(g.start), text);
      bool agree = out.clean() == (want.ok && want.pos == in.size()) && m.ok == want.ok &&
                   (!m.ok || tokens_in(m.pos) == want.pos);
      ++compared;
      if (!agree && disagreements++ == 0)
        c.expect(false, "grammar:\n" + serialize_grammar(g) + "input `" + text + "`");
    }
  }
  double secs = seconds_since(t0);
  c.expect(disagreements == 0, std::to_string(disagreements) + " disagreements");
  c.expect(secs < 30.0, "took " + std::to_string(secs) + " s");
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d grammars x %zu inputs (length <= 8), %zu disagreements, %.1f s", grammars,
                inputs.size(), disagreements, secs);
  report("AC6", "engine matches naive recognizer", c, buf);
}

// 7. Recovery quality on the single-token deletion corpus.
void mutation_recovery() {
  Check c;
  Annotation a = annotate(fixtures::tiny_java());
  Parser p(a.grammar);
  std::vector<CorpusCase> cases = load_corpus(fixtures::data_path("corpus"));
  CorpusSummary s = run_corpus(p, cases);
  for (const auto& cs : cases)
    c.expect(cs.expected_label && a.report.find(*cs.expected_label), cs.name + " has no guarding label");
  c.expect(s.total() >= 30, "only " + std::to_string(s.total()) + " cases");
  c.expect(s.problems == 0, std::to_string(s.problems) + " broken cases");
  c.expect(s.failed == 0, std::to_string(s.failed) + " cases without a tree");
  c.expect(s.label_mismatches == 0, std::to_string(s.label_mismatches) + " first-label mismatches");
  double pct = s.total() ? 100.0 * static_cast<double>(s.excellent) / static_cast<double>(s.total()) : 0.0;
  c.expect(pct >= 90.0, "excellent " + std::to_string(pct) + "%");
  if (!c.ok) c.detail << "\n" << format_summary(s);

  // The same programs with every one-token labeled site deleted, including
  // deletions whose error can only be detected later. Informational.
  std::size_t all = 0, all_excellent = 0, all_mismatch = 0, all_failed = 0;
  for (const auto& entry : std::filesystem::directory_iterator(fixtures::data_path("programs"))) {
    std::string program = fixtures::read(entry.path());
    ParseTree intended = *p.parse(program).tree;
    for (const auto& m : labeled_deletions(p, program, {false})) {
      ParseOutcome out = p.parse(m.text);
      QualityRating r = classify_recovery(out, intended);
      ++all;
      all_excellent += r.quality == Quality::Excellent;
      all_failed += r.quality == Quality::Failed;
      all_mismatch += out.errors.empty() || out.errors[0].label != m.label;
    }
  }
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "%zu cases, %zu failed, %zu label mismatches, %zu excellent (%.1f%%); unfiltered deletions: %zu cases, "
                "%zu failed, %zu label mismatches, %zu excellent",
                s.total(), s.failed, s.label_mismatches, s.excellent, pct, all, all_failed, all_mismatch,
                all_excellent);
  report("AC7", "mutation recovery", c, buf);
}

// 8. Label propagation through choice, repetition and negation.
void propagation_laws() {
  Check c;
  auto run = [](const std::string& grammar, const std::string& input) {
    Parser p(parse_grammar(grammar));
    return p.match(*nonterminal("S"), input);
  };
  MatchResult choice = run("S <- ^l / 'b' ;", "b");
  c.expect(!choice.ok && choice.label == "l" && choice.pos == 0, "choice caught a label");
  MatchResult choice_fail = run("S <- 'a' / 'b' ;", "b");
  c.expect(choice_fail.ok && choice_fail.pos == 1, "choice did not backtrack on fail");

  MatchResult star_fail = run("S <- 'a'* ;", "a a b");
  c.expect(star_fail.ok && star_fail.pos == 3, "star did not stop on fail");
  MatchResult star_label = run("S <- ('a' / ^l)* ;", "a a b");
  c.expect(!star_label.ok && star_label.label == "l" && star_label.pos == 3, "star swallowed a label");

  MatchResult not_label = run("S <- !^l ;", "b");
  c.expect(not_label.ok && not_label.pos == 0, "not did not turn a label into success");
  MatchResult not_ok = run("S <- !'a' ;", "a");
  c.expect(not_ok.failed_plain() && not_ok.pos == 0, "not did not turn success into fail");
  report("AC8", "label propagation laws", c, "choice, star and not on one-rule grammars");
}

}  // namespace

int main() {
  std::vector<std::function<void()>> checks{fig2_reproduction, rpw_recovery_set,   fig3_replay,
                                            language_preservation, first_soundness, engine_oracle,
                                            mutation_recovery, propagation_laws};
  for (auto& check : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      std::cout << "FAIL (exception) " << e.what() << std::endl;
      ++failures;
    }
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
