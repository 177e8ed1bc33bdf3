#include "pegrec/annotator.hpp"

#include "pegrec/diagnostics.hpp"

namespace pegrec {

namespace {

const Expr& last_item(const Expr& e) { return e.op == Op::Sequence ? last_item(e.kid(1)) : e; }

std::string child_path(const std::string& path, int index) {
  return path.empty() ? std::to_string(index) : path + "." + std::to_string(index);
}

// Removes p / ^l annotation sites, keeping p. Bare throws stay.
ExprPtr strip_annotations(const ExprPtr& e) {
  if (is_annotation_site(*e)) return strip_annotations(e->kids[0]);
  if (e->kids.empty()) return e;
  auto copy = std::make_shared<Expr>(*e);
  bool changed = false;
  for (auto& k : copy->kids) {
    auto stripped = strip_annotations(k);
    changed = changed || stripped != k;
    k = stripped;
  }
  return changed ? copy : e;
}

// Ordered choice of the kinds of s; an empty set stands for EOF.
ExprPtr token_choice(const Grammar& g, const TokenSet& s) {
  std::vector<ExprPtr> alts;
  for (const auto& kind : ordered_kinds(g, s)) alts.push_back(terminal(kind));
  if (alts.empty()) alts.push_back(terminal(std::string(kEof)));
  return choice(std::move(alts));
}

class RuleAnnotator {
 public:
  RuleAnnotator(const SetAnalysis& sets, const AnnotatorConfig& cfg, Grammar& out, AnnotationReport& report,
                const std::string& rule, bool star_mode)
      : sets_(sets), cfg_(cfg), out_(out), report_(report), rule_(rule), star_mode_(star_mode) {}

  ExprPtr run(const ExprPtr& body, const TokenSet& flw) { return labexp(body, false, flw, "", nullptr); }

  bool saw_star_site() const { return star_site_; }

 private:
  ExprPtr labexp(const ExprPtr& p, bool seq_flag, const TokenSet& flw, const std::string& path, const Expr* prev) {
    if (is_annotation_site(*p)) {
      ensure_recovery(p->kid(1).name, describe(p->kid(0)), flw, path, to_string(*p));
      return p;
    }
    switch (p->op) {
      case Op::Terminal:
        if (seq_flag) return addlab(p, flw, path, prev, false);
        skip(path, *p, SkipReason::FirstPosition);
        return p;
      case Op::NonTerminal:
        if (seq_flag && !sets_.nullable(*p)) return addlab(p, flw, path, prev, false);
        skip(path, *p, seq_flag ? SkipReason::Nullable : SkipReason::FirstPosition);
        return p;
      case Op::Sequence: {
        const ExprPtr& p1 = p->kids[0];
        const ExprPtr& p2 = p->kids[1];
        auto px = labexp(p1, seq_flag, sets_.calck(*p2, flw), child_path(path, 0), prev);
        auto py = labexp(p2, seq_flag || !sets_.nullable(*p1), flw, child_path(path, 1), &last_item(*p1));
        return px == p1 && py == p2 ? p : seq(px, py);
      }
      case Op::Choice: {
        const ExprPtr& p1 = p->kids[0];
        const ExprPtr& p2 = p->kids[1];
        ExprPtr px = p1;
        if (!sets_.first(*p1).intersects(sets_.calck(*p2, flw)))
          px = labexp(p1, false, flw, child_path(path, 0), nullptr);
        else
          skip(child_path(path, 0), *p1, SkipReason::NonDisjointChoice);
        auto py = labexp(p2, false, flw, child_path(path, 1), nullptr);
        ExprPtr result = px == p1 && py == p2 ? p : choice(px, py);
        if (seq_flag && !sets_.nullable(*p)) return addlab(result, flw, path, prev, false);
        if (seq_flag) skip(path, *p, SkipReason::Nullable);
        return result;
      }
      case Op::Star: {
        const auto& body = p->kids[0];
        if (sets_.first(*body).intersects(flw)) {
          skip(path, *p, SkipReason::RepetitionOverlap);
          return p;
        }
        auto inner = labexp(body, false, flw, child_path(path, 0), nullptr);
        if (!star_mode_ || already_guarded(*body)) return inner == body ? p : star(inner);
        star_site_ = true;
        TokenSet resync = sets_.first(*body).without_epsilon();
        resync.merge(flw);
        auto guarded = addlab(inner, resync, child_path(path, 0), nullptr, true);
        return star(seq(not_(token_choice(out_, flw)), guarded));
      }
      case Op::Throw:
        ensure_recovery(p->name, p->expected, flw, path, to_string(*p));
        return p;
      default:
        return p;
    }
  }

  ExprPtr addlab(const ExprPtr& p, const TokenSet& flw, const std::string& path, const Expr* prev, bool star_site) {
    std::string label;
    do {
      label = cfg_.label_prefix + "_" + rule_ + "_" + std::to_string(++counter_);
    } while (out_.has_label(label));
    out_.add_label(label);
    out_.recovery[label] = skip_until(out_, flw);
    std::string expected = describe(*p);
    out_.messages[label] = default_message(out_, expected);
    InsertedSite site{rule_, path, label, expected, to_string(*p), flw, star_site, false};
    site.follows_repetition = prev != nullptr && prev->op == Op::Star;
    report_.inserted.push_back(std::move(site));
    return annotated(p, label);
  }

  void ensure_recovery(const std::string& label, const std::string& expected, const TokenSet& flw,
                       const std::string& path, const std::string& text) {
    if (out_.recovery.count(label)) return;
    out_.recovery[label] = skip_until(out_, flw);
    if (!out_.messages.count(label) && !expected.empty()) out_.messages[label] = default_message(out_, expected);
    report_.recovery_added.push_back({rule_, path, label, expected, text, flw, false, false});
  }

  // (!S [p]^l) produced by an earlier star-mode run.
  static bool already_guarded(const Expr& body) {
    return body.op == Op::Sequence && body.kid(0).op == Op::Not && is_annotation_site(body.kid(1));
  }

  void skip(const std::string& path, const Expr& site, SkipReason reason) {
    report_.skipped.push_back({rule_, path, to_string(site), reason});
  }

  const SetAnalysis& sets_;
  const AnnotatorConfig& cfg_;
  Grammar& out_;
  AnnotationReport& report_;
  const std::string& rule_;
  bool star_mode_;
  bool star_site_ = false;
  int counter_ = 0;
};

}  // namespace

std::string_view to_string(SkipReason reason) {
  switch (reason) {
    case SkipReason::NonDisjointChoice: return "non-disjoint-choice";
    case SkipReason::Nullable: return "nullable";
    case SkipReason::FirstPosition: return "first-position";
    case SkipReason::RepetitionOverlap: return "repetition-overlap";
  }
  return "?";
}

const InsertedSite* AnnotationReport::find(std::string_view label) const {
  for (const auto& s : inserted)
    if (s.label == label) return &s;
  return nullptr;
}

ExprPtr skip_until(const Grammar& g, const TokenSet& stop) {
  return star(seq(not_(token_choice(g, stop)), any()));
}

Annotation annotate(const Grammar& input, const AnnotatorConfig& cfg) {
  for (const auto& name : cfg.star_mode_rules)
    if (!input.find_syntactic(name)) throw GrammarError("star-mode rule " + name + " is not defined");

  Grammar g = desugar(input);
  if (!cfg.preserve_existing) {
    for (auto& r : g.syntactic) r.body = strip_annotations(r.body);
    Grammar rules_only = g;
    rules_only.recovery.clear();
    validate(rules_only);  // recomputes the label set from the remaining throws
    g.labels = rules_only.labels;
    for (auto it = g.recovery.begin(); it != g.recovery.end();)
      it = g.has_label(it->first) ? std::next(it) : g.recovery.erase(it);
    for (auto it = g.messages.begin(); it != g.messages.end();)
      it = g.has_label(it->first) ? std::next(it) : g.messages.erase(it);
  }

  SetAnalysis sets(g);
  Annotation result{g, {}};
  for (auto& rule : result.grammar.syntactic) {
    bool star_mode = cfg.star_mode_rules.count(rule.name) != 0;
    RuleAnnotator annotator(sets, cfg, result.grammar, result.report, rule.name, star_mode);
    rule.body = annotator.run(rule.body, sets.follow(rule.name));
    if (star_mode && !annotator.saw_star_site())
      result.report.notes.push_back("star mode: rule " + rule.name + " has no annotatable repetition");
  }
  return result;
}

Annotation annotate_star_mode(const Grammar& g, const std::set<std::string>& rules, AnnotatorConfig cfg) {
  cfg.star_mode_rules.insert(rules.begin(), rules.end());
  return annotate(g, cfg);
}

nlohmann::json report_to_json(const Grammar& g, const AnnotationReport& report) {
  auto site_json = [&](const InsertedSite& s) {
    return nlohmann::json{{"rule", s.rule},
                          {"path", s.path},
                          {"label", s.label},
                          {"expected", s.expected},
                          {"site", s.site},
                          {"recovery_set", ordered_kinds(g, s.recovery_set)},
                          {"star_mode", s.star_mode},
                          {"follows_repetition", s.follows_repetition}};
  };
  nlohmann::json j;
  j["inserted"] = nlohmann::json::array();
  for (const auto& s : report.inserted) j["inserted"].push_back(site_json(s));
  j["skipped"] = nlohmann::json::array();
  for (const auto& s : report.skipped)
    j["skipped"].push_back({{"rule", s.rule}, {"path", s.path}, {"site", s.site}, {"reason", to_string(s.reason)}});
  j["recovery_added"] = nlohmann::json::array();
  for (const auto& s : report.recovery_added) j["recovery_added"].push_back(site_json(s));
  j["notes"] = report.notes;
  return j;
}

}  // namespace pegrec
