#include "pegrec/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>

namespace pegrec {

namespace {

std::string format_error(const std::string& message, const std::optional<SourcePos>& where) {
  if (!where) return message;
  return std::to_string(where->line) + ":" + std::to_string(where->column) + ": " + message;
}

void collect_literals(const Expr& e, std::vector<std::string>& out, std::set<std::string>& seen) {
  for_each_node(e, [&](const Expr& n) {
    if (n.op == Op::Terminal && is_literal_kind(n.name) && seen.insert(n.name).second)
      out.push_back(n.name);
  });
}

// Nullability over desugared expressions, used only for the left-recursion
// check. Terminal EOF consumes nothing, so it counts as nullable here.
class Nullability {
 public:
  explicit Nullability(const std::vector<Rule>& rules) {
    for (const auto& r : rules) table_[r.name] = false;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rules) {
        if (!table_[r.name] && nullable(*r.body)) {
          table_[r.name] = true;
          changed = true;
        }
      }
    }
  }

  bool nullable(const Expr& e) const {
    switch (e.op) {
      case Op::Empty:
      case Op::Star:
      case Op::Not:
        return true;
      case Op::Terminal:
        return e.name == kEof;
      case Op::NonTerminal: {
        auto it = table_.find(e.name);
        return it != table_.end() && it->second;
      }
      case Op::Sequence:
        return nullable(e.kid(0)) && nullable(e.kid(1));
      case Op::Choice:
        return nullable(e.kid(0)) || nullable(e.kid(1));
      case Op::Literal:
        return e.name.empty();
      default:
        return false;
    }
  }

  // Rules reachable in head position, i.e. before any input is consumed.
  void heads(const Expr& e, std::vector<std::string>& out) const {
    switch (e.op) {
      case Op::NonTerminal:
        out.push_back(e.name);
        return;
      case Op::Sequence:
        heads(e.kid(0), out);
        if (nullable(e.kid(0))) heads(e.kid(1), out);
        return;
      case Op::Choice:
        heads(e.kid(0), out);
        heads(e.kid(1), out);
        return;
      case Op::Star:
      case Op::Not:
        heads(e.kid(), out);
        return;
      default:
        return;
    }
  }

 private:
  std::unordered_map<std::string, bool> table_;
};

void check_left_recursion(const std::vector<Rule>& rules) {
  std::vector<Rule> core;
  for (const auto& r : rules) core.push_back({r.name, desugar(r.body), r.pos});
  Nullability nullability(core);
  std::unordered_map<std::string, std::vector<std::string>> edges;
  std::unordered_map<std::string, const Rule*> by_name;
  for (const auto& r : core) {
    nullability.heads(*r.body, edges[r.name]);
    by_name[r.name] = &r;
  }
  // 0 = unvisited, 1 = on stack, 2 = done
  std::unordered_map<std::string, int> state;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    state[name] = 1;
    for (const auto& next : edges[name]) {
      if (!by_name.count(next)) continue;
      if (state[next] == 1) throw GrammarError("left recursion on " + next, by_name[next]->pos);
      if (state[next] == 0) visit(next);
    }
    state[name] = 2;
  };
  for (const auto& r : core)
    if (state[r.name] == 0) visit(r.name);
}

void check_syntactic_expr(const Grammar& g, const Expr& e, const std::string& where, const SourcePos& pos) {
  for_each_node(e, [&](const Expr& n) {
    switch (n.op) {
      case Op::Terminal:
        if (!is_literal_kind(n.name) && n.name != kEof && !g.find_lexical(n.name))
          throw GrammarError("undefined token kind " + n.name + " in " + where, pos);
        break;
      case Op::NonTerminal:
        if (!g.find_syntactic(n.name))
          throw GrammarError("undefined nonterminal " + n.name + " in " + where, pos);
        break;
      case Op::Throw:
      case Op::Annotated:
        if (n.name == kFail) throw GrammarError("throw of reserved label fail in " + where, pos);
        if (n.name.empty()) throw GrammarError("empty label in " + where, pos);
        break;
      case Op::Literal:
      case Op::CharClass:
        throw GrammarError("character-level expression in syntactic " + where, pos);
      default:
        break;
    }
  });
}

void check_lexical_expr(const Grammar& g, const Expr& e, const std::string& where, const SourcePos& pos) {
  for_each_node(e, [&](const Expr& n) {
    switch (n.op) {
      case Op::NonTerminal:
        if (!g.find_lexical(n.name))
          throw GrammarError("lexical " + where + " references undefined lexical rule " + n.name, pos);
        break;
      case Op::Terminal:
      case Op::Throw:
      case Op::Annotated:
        throw GrammarError("labels and token references are not allowed in lexical " + where, pos);
      default:
        break;
    }
  });
}

void collect_labels(const Expr& e, Grammar& g) {
  for_each_node(e, [&](const Expr& n) {
    if (n.op == Op::Throw || n.op == Op::Annotated) g.add_label(n.name);
  });
}

ExprPtr desugar_node(const ExprPtr& e) {
  switch (e->op) {
    case Op::Annotated: {
      auto body = desugar_node(e->kids[0]);
      return choice(body, throw_(e->name, describe(*body)));
    }
    case Op::Optional:
      return choice(desugar_node(e->kids[0]), empty());
    case Op::Plus: {
      auto body = desugar_node(e->kids[0]);
      return seq(body, star(body));
    }
    case Op::And:
      return not_(not_(desugar_node(e->kids[0])));
    default:
      break;
  }
  if (e->kids.empty()) return e;
  std::vector<ExprPtr> kids;
  bool changed = false;
  for (const auto& k : e->kids) {
    kids.push_back(desugar_node(k));
    changed = changed || kids.back() != k;
  }
  // p / ^l written by hand gets the same description an annotation would.
  if (e->op == Op::Choice && kids[1]->op == Op::Throw && kids[1]->expected.empty()) {
    kids[1] = throw_(kids[1]->name, describe(*kids[0]));
    changed = true;
  }
  if (!changed) return e;
  auto copy = std::make_shared<Expr>(*e);
  copy->kids = std::move(kids);
  return copy;
}

}  // namespace

GrammarError::GrammarError(std::string message, std::optional<SourcePos> where)
    : std::runtime_error(format_error(message, where)), message_(std::move(message)), where_(where) {}

bool is_lexical_name(std::string_view name) {
  // A lone capital (S, A) names a syntactic rule, as in textbook grammars.
  if (name.size() < 2 || !std::isupper(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

const Rule* Grammar::find_syntactic(std::string_view name) const {
  for (const auto& r : syntactic)
    if (r.name == name) return &r;
  return nullptr;
}

Rule* Grammar::find_syntactic(std::string_view name) {
  for (auto& r : syntactic)
    if (r.name == name) return &r;
  return nullptr;
}

const Rule* Grammar::find_lexical(std::string_view name) const {
  for (const auto& r : lexical)
    if (r.name == name) return &r;
  return nullptr;
}

bool Grammar::has_label(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

void Grammar::add_label(const std::string& label) {
  if (!has_label(label)) labels.push_back(label);
}

std::vector<std::string> Grammar::literal_kinds() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& r : syntactic) collect_literals(*r.body, out, seen);
  for (const auto& [label, e] : recovery) collect_literals(*e, out, seen);
  return out;
}

std::vector<std::string> Grammar::token_kinds() const {
  std::vector<std::string> out;
  for (const auto& r : lexical) out.push_back(r.name);
  for (auto& k : literal_kinds()) out.push_back(std::move(k));
  return out;
}

void validate(Grammar& g) {
  if (g.syntactic.empty()) throw GrammarError("grammar has no syntactic rules");
  if (g.start.empty()) g.start = g.syntactic.front().name;
  if (!g.find_syntactic(g.start)) throw GrammarError("start rule " + g.start + " is not defined");

  std::set<std::string> names;
  for (const auto* rules : {&g.syntactic, &g.lexical}) {
    for (const auto& r : *rules) {
      if (!names.insert(r.name).second) throw GrammarError("duplicate rule " + r.name, r.pos);
    }
  }
  for (const auto& r : g.syntactic)
    if (is_lexical_name(r.name)) throw GrammarError("syntactic rule with lexical name " + r.name, r.pos);
  for (const auto& r : g.lexical) {
    if (!is_lexical_name(r.name)) throw GrammarError("lexical rule with syntactic name " + r.name, r.pos);
    if (r.name == kEof) throw GrammarError("EOF is a reserved token kind", r.pos);
  }

  for (const auto& r : g.syntactic) check_syntactic_expr(g, *r.body, "rule " + r.name, r.pos);
  for (const auto& r : g.lexical) check_lexical_expr(g, *r.body, "rule " + r.name, r.pos);

  g.labels.clear();
  for (const auto& r : g.syntactic) collect_labels(*r.body, g);
  // Labels thrown by recovery expressions count as declared too.
  for (const auto& [label, e] : g.recovery) {
    check_syntactic_expr(g, *e, "recovery rule " + label, {});
    collect_labels(*e, g);
  }
  for (const auto& [label, e] : g.recovery) {
    if (!g.has_label(label)) throw GrammarError("recovery rule for undeclared label " + label);
  }

  check_left_recursion(g.syntactic);
  check_left_recursion(g.lexical);
}

ExprPtr desugar(const ExprPtr& e) { return desugar_node(e); }

Grammar desugar(const Grammar& g) {
  Grammar out = g;
  for (auto& r : out.syntactic) r.body = desugar_node(r.body);
  for (auto& r : out.lexical) r.body = desugar_node(r.body);
  for (auto& [label, e] : out.recovery) e = desugar_node(e);
  for (const auto& r : out.syntactic) collect_labels(*r.body, out);
  return out;
}

std::string serialize_grammar(const Grammar& g) {
  std::string out;
  out += "%start " + g.start + " ;\n\n";
  for (const auto& r : g.syntactic) out += r.name + " <- " + to_string(*r.body) + " ;\n";
  if (!g.lexical.empty()) {
    out += '\n';
    for (const auto& r : g.lexical) out += r.name + " <- " + to_string(*r.body) + " ;\n";
  }
  if (!g.recovery.empty()) {
    out += "\n%recovery\n";
    std::set<std::string> done;
    for (const auto& label : g.labels) {
      auto it = g.recovery.find(label);
      if (it == g.recovery.end()) continue;
      out += label + " <- " + to_string(*it->second) + " ;\n";
      done.insert(label);
    }
    for (const auto& [label, e] : g.recovery)
      if (!done.count(label)) out += label + " <- " + to_string(*e) + " ;\n";
  }
  return out;
}

bool structurally_equal(const Grammar& a, const Grammar& b) {
  auto same_rules = [](const std::vector<Rule>& x, const std::vector<Rule>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].name != y[i].name || !equivalent(*x[i].body, *y[i].body)) return false;
    return true;
  };
  if (a.start != b.start || !same_rules(a.syntactic, b.syntactic) || !same_rules(a.lexical, b.lexical))
    return false;
  if (a.recovery.size() != b.recovery.size()) return false;
  for (const auto& [label, e] : a.recovery) {
    auto it = b.recovery.find(label);
    if (it == b.recovery.end() || !equivalent(*e, *it->second)) return false;
  }
  return true;
}

}  // namespace pegrec
