// Recursive-descent reader for the grammar DSL.
//
//   file      <- (directive / rule)*
//   directive <- '%start' Ident ';' / '%recovery'
//   rule      <- Ident '<-' choice ';'
//   choice    <- sequence ('/' sequence)*
//   sequence  <- prefix*
//   prefix    <- ('!' / '&')* suffix
//   suffix    <- primary ('*' / '+' / '?')*
//   primary   <- Ident / Literal / Class / '.' / '(' choice ')' / '[' choice ']' '^' Ident
//              / '^' Ident / 'ε'
//
// Classes exist only in lexical (ALL-CAPS) rules; there '[' always opens a
// class, elsewhere it opens an annotation.

#include <cctype>
#include <set>

#include "pegrec/grammar.hpp"
#include "pegrec/utf8.hpp"

namespace pegrec {

namespace {

class DslReader {
 public:
  explicit DslReader(std::string_view text) : text_(text) {}

  Grammar read() {
    Grammar g;
    bool in_recovery = false;
    std::set<std::string> seen;
    skip_space();
    while (!at_end()) {
      if (peek() == '%') {
        SourcePos where = pos();
        advance();
        std::string word = identifier("directive name");
        if (word == "start") {
          skip_space();
          if (!g.start.empty()) throw GrammarError("duplicate %start", where);
          g.start = identifier("start rule name");
          expect(';');
        } else if (word == "recovery") {
          in_recovery = true;
        } else {
          throw GrammarError("unknown directive %" + word, where);
        }
        skip_space();
        continue;
      }
      SourcePos where = pos();
      std::string name = identifier("rule name");
      skip_space();
      expect_arrow();
      lexical_ = !in_recovery && is_lexical_name(name);
      ExprPtr body = parse_choice();
      expect(';');
      if (in_recovery) {
        if (g.recovery.count(name)) throw GrammarError("duplicate recovery rule " + name, where);
        g.recovery[name] = body;
        recovery_pos_[name] = where;
      } else {
        if (!seen.insert(name).second) throw GrammarError("duplicate rule " + name, where);
        (lexical_ ? g.lexical : g.syntactic).push_back({name, body, where});
      }
      skip_space();
    }
    for (const auto& r : g.syntactic) collect(*r.body, g);
    for (const auto& [label, e] : g.recovery) collect(*e, g);
    for (const auto& [label, pos] : recovery_pos_)
      if (!g.has_label(label)) throw GrammarError("recovery rule for undeclared label " + label, pos);
    return g;
  }

 private:
  static void collect(const Expr& e, Grammar& g) {
    for_each_node(e, [&](const Expr& n) {
      if (n.op == Op::Throw || n.op == Op::Annotated) g.add_label(n.name);
    });
  }

  bool at_end() const { return offset_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return offset_ + ahead < text_.size() ? text_[offset_ + ahead] : '\0';
  }
  SourcePos pos() const { return {line_, column_}; }

  void advance() {
    std::size_t len = utf8_length(text_, offset_);
    if (text_[offset_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    offset_ += len;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#' || (c == '/' && peek(1) == '/')) {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string found = at_end() ? "end of input" : "'" + std::string(1, peek()) + "'";
    throw GrammarError("syntax error: expected " + what + ", found " + found, pos());
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("'") + c + "'");
    advance();
    skip_space();
  }

  void expect_arrow() {
    if (peek() != '<' || peek(1) != '-') fail("'<-'");
    advance();
    advance();
    skip_space();
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string identifier(const std::string& what) {
    if (!ident_start(peek())) fail(what);
    std::string out;
    while (!at_end() && ident_char(peek())) {
      out += peek();
      advance();
    }
    return out;
  }

  bool at_epsilon() const { return text_.substr(offset_).starts_with("\xCE\xB5"); }

  bool starts_primary() const {
    char c = peek();
    return ident_start(c) || c == '\'' || c == '"' || c == '.' || c == '(' || c == '[' || c == '^' ||
           c == '!' || c == '&' || at_epsilon();
  }

  ExprPtr parse_choice() {
    std::vector<ExprPtr> alts{parse_sequence()};
    while (peek() == '/' && peek(1) != '/') {
      advance();
      skip_space();
      alts.push_back(parse_sequence());
    }
    return choice(std::move(alts));
  }

  ExprPtr parse_sequence() {
    std::vector<ExprPtr> items;
    while (!at_end() && starts_primary()) {
      items.push_back(parse_prefix());
      skip_space();
    }
    return seq(std::move(items));
  }

  ExprPtr parse_prefix() {
    if (peek() == '!' || peek() == '&') {
      bool negative = peek() == '!';
      advance();
      skip_space();
      ExprPtr body = parse_prefix();
      return negative ? not_(body) : and_(body);
    }
    return parse_suffix();
  }

  ExprPtr parse_suffix() {
    ExprPtr e = parse_primary();
    while (true) {
      char c = peek();
      if (c == '*') e = star(e);
      else if (c == '+') e = plus(e);
      else if (c == '?') e = optional(e);
      else break;
      advance();
    }
    return e;
  }

  ExprPtr parse_primary() {
    char c = peek();
    if (at_epsilon()) {
      advance();
      return empty();
    }
    if (ident_start(c)) {
      std::string name = identifier("name");
      if (lexical_) return nonterminal(name);
      return is_lexical_name(name) ? terminal(name) : nonterminal(name);
    }
    if (c == '\'' || c == '"') {
      std::string text = quoted();
      return lexical_ ? literal(text) : terminal(literal_kind(text));
    }
    if (c == '.') {
      advance();
      return any();
    }
    if (c == '(') {
      advance();
      skip_space();
      ExprPtr inner = parse_choice();
      if (peek() != ')') fail("')'");
      advance();
      return inner;
    }
    if (c == '[') {
      if (lexical_) return char_class_expr();
      advance();
      skip_space();
      ExprPtr body = parse_choice();
      if (peek() != ']') fail("']'");
      advance();
      if (peek() != '^') fail("'^' after annotation");
      advance();
      return annotated(body, identifier("label"));
    }
    if (c == '^') {
      if (lexical_) fail("expression (labels are not allowed in lexical rules)");
      advance();
      return throw_(identifier("label"));
    }
    fail("expression");
  }

  char32_t escaped_char() {
    advance();  // backslash
    if (at_end()) fail("escape character");
    char c = peek();
    advance();
    switch (c) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      default: return static_cast<unsigned char>(c);
    }
  }

  char32_t class_or_literal_char() {
    if (peek() == '\\') return escaped_char();
    std::size_t len = 0;
    char32_t cp = decode_utf8(text_, offset_, len);
    advance();
    return cp;
  }

  std::string quoted() {
    char quote = peek();
    advance();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail(std::string("closing ") + quote);
      if (peek() == quote) break;
      out += encode_utf8(class_or_literal_char());
    }
    advance();
    return out;
  }

  ExprPtr char_class_expr() {
    advance();  // '['
    bool negated = false;
    if (peek() == '^') {
      negated = true;
      advance();
    }
    std::vector<CharRange> ranges;
    while (true) {
      if (at_end() || peek() == '\n') fail("']'");
      if (peek() == ']') break;
      char32_t lo = class_or_literal_char();
      char32_t hi = lo;
      if (peek() == '-' && peek(1) != ']') {
        advance();
        hi = class_or_literal_char();
        if (hi < lo) throw GrammarError("reversed character range", pos());
      }
      ranges.push_back({lo, hi});
    }
    advance();
    return char_class(std::move(ranges), negated);
  }

  std::string_view text_;
  std::size_t offset_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  bool lexical_ = false;
  std::map<std::string, SourcePos> recovery_pos_;
};

}  // namespace

Grammar parse_grammar(std::string_view text) {
  Grammar g = DslReader(text).read();
  validate(g);
  return g;
}

}  // namespace pegrec
