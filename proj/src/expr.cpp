#include "pegrec/expr.hpp"

#include <cstdint>
#include <stdexcept>

#include "pegrec/utf8.hpp"

namespace pegrec {

namespace {

ExprPtr make(Op op, std::string name = {}, std::vector<ExprPtr> kids = {}) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->name = std::move(name);
  e->kids = std::move(kids);
  return e;
}

std::string escape(std::string_view text, char quote) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default:
        if (c == quote) out += '\\';
        out += c;
    }
  }
  return out;
}

std::string class_char(char32_t c) {
  switch (c) {
    case '\n': return "\\n";
    case '\t': return "\\t";
    case '\r': return "\\r";
    case '\\': return "\\\\";
    case ']': return "\\]";
    case '[': return "\\[";
    case '-': return "\\-";
    case '^': return "\\^";
    default: return encode_utf8(c);
  }
}

enum Prec { kChoicePrec = 0, kSeqPrec = 1, kPrefixPrec = 2, kSuffixPrec = 3 };

void print(const Expr& e, int prec, std::string& out);

void print_choice_alts(const Expr& e, std::string& out) {
  const Expr* cur = &e;
  bool first = true;
  while (true) {
    if (!first) out += " / ";
    first = false;
    print(cur->kid(0), kSeqPrec, out);
    const Expr& rest = cur->kid(1);
    if (rest.op == Op::Choice && !is_annotation_site(rest)) {
      cur = &rest;
      continue;
    }
    out += " / ";
    print(rest, kSeqPrec, out);
    break;
  }
}

void print_seq_items(const Expr& e, std::string& out) {
  const Expr* cur = &e;
  while (true) {
    print(cur->kid(0), kPrefixPrec, out);
    out += ' ';
    const Expr& rest = cur->kid(1);
    if (rest.op == Op::Sequence) {
      cur = &rest;
      continue;
    }
    print(rest, kPrefixPrec, out);
    break;
  }
}

void print(const Expr& e, int prec, std::string& out) {
  switch (e.op) {
    case Op::Empty:
      out += "()";
      return;
    case Op::Terminal:
    case Op::NonTerminal:
      out += e.name;
      return;
    case Op::AnyToken:
      out += '.';
      return;
    case Op::Throw:
      out += '^';
      out += e.name;
      return;
    case Op::Literal:
      out += '\'';
      out += escape(e.name, '\'');
      out += '\'';
      return;
    case Op::CharClass:
      out += '[';
      if (e.negated) out += '^';
      for (const auto& r : e.ranges) {
        out += class_char(r.lo);
        if (r.hi != r.lo) {
          out += '-';
          out += class_char(r.hi);
        }
      }
      out += ']';
      return;
    case Op::Annotated:
      out += '[';
      print(e.kid(), kChoicePrec, out);
      out += "]^";
      out += e.name;
      return;
    case Op::Choice:
      if (is_annotation_site(e)) {
        out += '[';
        print(e.kid(0), kChoicePrec, out);
        out += "]^";
        out += e.kid(1).name;
        return;
      }
      if (prec > kChoicePrec) out += '(';
      print_choice_alts(e, out);
      if (prec > kChoicePrec) out += ')';
      return;
    case Op::Sequence:
      if (prec > kSeqPrec) out += '(';
      print_seq_items(e, out);
      if (prec > kSeqPrec) out += ')';
      return;
    case Op::Star:
    case Op::Plus:
    case Op::Optional:
      print(e.kid(), kSuffixPrec, out);
      out += e.op == Op::Star ? '*' : e.op == Op::Plus ? '+' : '?';
      return;
    case Op::Not:
    case Op::And:
      if (prec > kPrefixPrec) out += '(';
      out += e.op == Op::Not ? '!' : '&';
      print(e.kid(), kPrefixPrec, out);
      if (prec > kPrefixPrec) out += ')';
      return;
  }
}

}  // namespace

ExprPtr empty() { return make(Op::Empty); }
ExprPtr terminal(std::string kind) { return make(Op::Terminal, std::move(kind)); }
ExprPtr nonterminal(std::string rule) { return make(Op::NonTerminal, std::move(rule)); }
ExprPtr seq(ExprPtr left, ExprPtr right) {
  return make(Op::Sequence, {}, {std::move(left), std::move(right)});
}

ExprPtr seq(std::vector<ExprPtr> items) {
  if (items.empty()) return empty();
  ExprPtr acc = items.back();
  for (auto it = items.rbegin() + 1; it != items.rend(); ++it) acc = seq(*it, acc);
  return acc;
}

ExprPtr choice(ExprPtr first, ExprPtr second) {
  return make(Op::Choice, {}, {std::move(first), std::move(second)});
}

ExprPtr choice(std::vector<ExprPtr> alternatives) {
  if (alternatives.empty()) throw std::invalid_argument("choice of zero alternatives");
  ExprPtr acc = alternatives.back();
  for (auto it = alternatives.rbegin() + 1; it != alternatives.rend(); ++it) acc = choice(*it, acc);
  return acc;
}

ExprPtr star(ExprPtr body) { return make(Op::Star, {}, {std::move(body)}); }
ExprPtr not_(ExprPtr body) { return make(Op::Not, {}, {std::move(body)}); }

ExprPtr throw_(std::string label, std::string expected) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Throw;
  e->name = std::move(label);
  e->expected = std::move(expected);
  return e;
}

ExprPtr any() { return make(Op::AnyToken); }
ExprPtr annotated(ExprPtr body, std::string label) {
  return make(Op::Annotated, std::move(label), {std::move(body)});
}
ExprPtr optional(ExprPtr body) { return make(Op::Optional, {}, {std::move(body)}); }
ExprPtr plus(ExprPtr body) { return make(Op::Plus, {}, {std::move(body)}); }
ExprPtr and_(ExprPtr body) { return make(Op::And, {}, {std::move(body)}); }
ExprPtr literal(std::string text) { return make(Op::Literal, std::move(text)); }

ExprPtr char_class(std::vector<CharRange> ranges, bool negated) {
  auto e = std::make_shared<Expr>();
  e->op = Op::CharClass;
  e->ranges = std::move(ranges);
  e->negated = negated;
  return e;
}

std::string literal_kind(std::string_view text) { return "'" + escape(text, '\'') + "'"; }

bool is_literal_kind(std::string_view kind) {
  return kind.size() >= 2 && kind.front() == '\'' && kind.back() == '\'';
}

std::string literal_text(std::string_view kind) {
  std::string out;
  for (std::size_t i = 1; i + 1 < kind.size(); ++i) {
    char c = kind[i];
    if (c == '\\' && i + 2 < kind.size()) {
      char n = kind[++i];
      out += n == 'n' ? '\n' : n == 't' ? '\t' : n == 'r' ? '\r' : n;
    } else {
      out += c;
    }
  }
  return out;
}

bool is_annotation_site(const Expr& e) {
  return e.op == Op::Choice && e.kid(1).op == Op::Throw;
}

bool equivalent(const Expr& a, const Expr& b) {
  if (a.op == Op::Annotated && is_annotation_site(b))
    return a.name == b.kid(1).name && equivalent(a.kid(), b.kid(0));
  if (b.op == Op::Annotated && is_annotation_site(a)) return equivalent(b, a);
  if (a.op != b.op || a.name != b.name || a.kids.size() != b.kids.size()) return false;
  if (a.op == Op::CharClass && (a.ranges != b.ranges || a.negated != b.negated)) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!equivalent(*a.kids[i], *b.kids[i])) return false;
  return true;
}

std::string describe(const Expr& e) {
  if (e.op == Op::Terminal || e.op == Op::NonTerminal) return e.name;
  if (is_annotation_site(e) || e.op == Op::Annotated) return describe(e.kid(0));
  if (e.op == Op::Choice) {
    std::vector<const Expr*> alts;
    const Expr* cur = &e;
    while (cur->op == Op::Choice && !is_annotation_site(*cur)) {
      alts.push_back(&cur->kid(0));
      cur = &cur->kid(1);
    }
    alts.push_back(cur);
    std::string out;
    for (const Expr* alt : alts) {
      if (alt->op != Op::Terminal && alt->op != Op::NonTerminal) return to_string(e);
      if (!out.empty()) out += " / ";
      out += alt->name;
    }
    return out;
  }
  return to_string(e);
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, kChoicePrec, out);
  return out;
}

}  // namespace pegrec
