#include "pegrec/engine.hpp"

#include <set>
#include <unordered_map>

#include "pegrec/diagnostics.hpp"
#include "pegrec/utf8.hpp"

namespace pegrec {

namespace {

struct Compiled {
  explicit Compiled(const Grammar& g) : grammar(desugar(g)), tokens(grammar) {
    for (const auto& r : grammar.syntactic) rules[r.name] = r.body.get();
    for (const auto& [label, e] : grammar.recovery) recovery[label] = e.get();
  }

  Grammar grammar;
  TokenRules tokens;
  std::unordered_map<std::string, const Expr*> rules;
  std::unordered_map<std::string, const Expr*> recovery;
};

struct TooManyErrors {};

// One parse over one input. Owns every piece of mutable state; the grammar is
// only read.
class Session {
 public:
  Session(const Compiled& impl, std::string_view input, const ParseOptions& opts)
      : impl_(impl), lexer_(impl.tokens, input), opts_(opts) {}

  struct Result {
    bool ok;
    std::size_t pos;
    std::string_view label;  // empty on success
  };

  Result eval(const Expr& e, std::size_t pos) {
    switch (e.op) {
      case Op::Empty:
        return succeed(pos);
      case Op::Terminal:
        return terminal(e.name, pos);
      case Op::AnyToken:
        return any_token(pos);
      case Op::NonTerminal:
        return nonterminal(e.name, pos);
      case Op::Sequence: {
        Result first = eval(e.kid(0), pos);
        if (!first.ok) return first;
        return eval(e.kid(1), first.pos);
      }
      case Op::Choice:
        return ordered_choice(e, pos);
      case Op::Star:
        return repetition(e.kid(), pos);
      case Op::Not: {
        Mark m = mark();
        ++predicate_depth_;
        Result r = eval(e.kid(), pos);
        --predicate_depth_;
        restore(m);
        return r.ok ? fail(pos) : succeed(pos);
      }
      case Op::Throw:
        return throw_label(e, pos);
      default:
        throw std::logic_error("parser given a non-core expression: " + to_string(e));
    }
  }

  std::vector<ParseTree>& nodes() { return nodes_; }
  std::vector<SyntaxError>& errors() { return errors_; }
  Lexer& lexer() { return lexer_; }

  SyntaxError make_error(std::string_view label, std::size_t pos, std::string message) {
    return {std::string(label), lexer_.position(pos), std::move(message), 0};
  }

  std::string farthest_message() {
    const Token& t = lexer_.next(farthest_);
    std::string out = "unexpected ";
    out += t.kind == kEof ? "end of input" : "'" + std::string(lexer_.spelling(t)) + "'";
    if (!farthest_expected_.empty()) {
      out += ", expected ";
      bool first = true;
      for (const auto& kind : impl_.grammar.token_kinds()) {
        if (!farthest_expected_.count(kind)) continue;
        if (!first) out += ", ";
        first = false;
        out += display_kind(impl_.grammar, kind);
      }
      for (const auto& kind : farthest_expected_) {
        if (impl_.grammar.find_lexical(kind) || is_literal_kind(kind)) continue;
        if (!first) out += ", ";
        first = false;
        out += display_kind(impl_.grammar, kind);
      }
    }
    return out;
  }

  std::size_t farthest() const { return farthest_; }

 private:
  struct Mark {
    std::size_t nodes;
    std::size_t errors;
    std::size_t guards;
    std::size_t trace;
  };

  Mark mark() const {
    return {nodes_.size(), errors_.size(), guard_log_.size(), opts_.site_trace ? opts_.site_trace->size() : 0};
  }

  // Discards everything an abandoned alternative produced.
  void restore(const Mark& m) {
    nodes_.resize(m.nodes);
    errors_.resize(m.errors, SyntaxError{});
    while (guard_log_.size() > m.guards) {
      guards_.erase(guard_log_.back());
      guard_log_.pop_back();
    }
    if (opts_.site_trace) opts_.site_trace->resize(m.trace);
  }

  static Result succeed(std::size_t pos) { return {true, pos, {}}; }
  static Result fail(std::size_t pos) { return {false, pos, kFail}; }

  // Terminal failures outside predicates and recovery feed the fallback
  // "farthest failure" message.
  Result fail_expecting(std::size_t pos, std::string_view expected) {
    if (predicate_depth_ == 0 && !in_recovery_) {
      if (pos > farthest_) {
        farthest_ = pos;
        farthest_expected_.clear();
      }
      if (pos == farthest_) farthest_expected_.insert(std::string(expected));
    }
    return fail(pos);
  }

  Result terminal(const std::string& kind, std::size_t pos) {
    const Token& t = lexer_.next(pos);
    if (kind == kEof) return t.kind == kEof ? succeed(pos) : fail_expecting(pos, kEof);
    if (t.kind != kind) return fail_expecting(pos, kind);
    nodes_.push_back(ParseTree::token(kind, t.span));
    return succeed(t.span.end);
  }

  Result any_token(std::size_t pos) {
    const Token& t = lexer_.next(pos);
    if (t.kind == kEof) return fail_expecting(pos, "any token");
    nodes_.push_back(ParseTree::token(std::string(t.kind), t.span));
    return succeed(t.span.end);
  }

  Result nonterminal(const std::string& name, std::size_t pos) {
    auto it = impl_.rules.find(name);
    if (it == impl_.rules.end()) throw std::logic_error("undefined rule " + name);
    std::size_t first_child = nodes_.size();
    Result r = eval(*it->second, pos);
    if (!r.ok) return r;
    std::vector<ParseTree> children(std::make_move_iterator(nodes_.begin() + first_child),
                                    std::make_move_iterator(nodes_.end()));
    nodes_.resize(first_child);
    Span span = children.empty() ? Span{pos, r.pos} : Span{children.front().span.begin, children.back().span.end};
    nodes_.push_back(ParseTree::rule(name, span, std::move(children)));
    return r;
  }

  Result ordered_choice(const Expr& e, std::size_t pos) {
    Mark m = mark();
    Result r = eval(e.kid(0), pos);
    if (r.ok) {
      if (opts_.site_trace && !in_recovery_ && e.kid(1).op == Op::Throw) record_site(e.kid(1).name, m.nodes, pos, r.pos);
      return r;
    }
    if (r.label != kFail) return r;
    restore(m);
    return eval(e.kid(1), pos);
  }

  void record_site(const std::string& label, std::size_t first_node, std::size_t from, std::size_t to) {
    std::size_t tokens = 0;
    for (std::size_t i = first_node; i < nodes_.size(); ++i) tokens += nodes_[i].count(NodeKind::Token);
    Span span{from, to};
    if (first_node < nodes_.size()) span = {nodes_[first_node].span.begin, nodes_.back().span.end};
    opts_.site_trace->push_back({label, span, tokens});
  }

  Result repetition(const Expr& body, std::size_t pos) {
    while (true) {
      Mark m = mark();
      Result r = eval(body, pos);
      if (r.ok) {
        if (r.pos == pos) return succeed(pos);  // no progress: stop iterating
        pos = r.pos;
        continue;
      }
      if (r.label != kFail) return r;
      restore(m);
      return succeed(pos);
    }
  }

  Result throw_label(const Expr& e, std::size_t pos) {
    Result thrown{false, pos, e.name};
    if (!opts_.use_recovery || in_recovery_ || predicate_depth_ > 0) return thrown;
    auto rec = impl_.recovery.find(e.name);
    if (rec == impl_.recovery.end()) return thrown;
    auto key = std::make_pair(e.name, pos);
    if (guards_.count(key)) return thrown;
    if (errors_.size() >= opts_.max_errors) throw TooManyErrors{};

    guards_.insert(key);
    guard_log_.push_back(key);
    errors_.push_back(make_error(e.name, pos, message_for(e)));

    Mark m = mark();
    in_recovery_ = true;
    Result r = eval(*rec->second, pos);
    in_recovery_ = false;
    nodes_.resize(m.nodes);
    if (opts_.site_trace) opts_.site_trace->resize(m.trace);
    if (!r.ok) {
      errors_.pop_back();
      return thrown;
    }
    nodes_.push_back(ParseTree::error(e.name, e.expected, {pos, r.pos}));
    return succeed(r.pos);
  }

 public:
  std::string message_for(const Expr& thrower) const {
    auto it = impl_.grammar.messages.find(thrower.name);
    if (it != impl_.grammar.messages.end()) return it->second;
    if (!thrower.expected.empty()) return default_message(impl_.grammar, thrower.expected);
    return thrower.name;
  }

 private:
  const Compiled& impl_;
  Lexer lexer_;
  const ParseOptions& opts_;
  std::vector<ParseTree> nodes_;
  std::vector<SyntaxError> errors_;
  std::set<std::pair<std::string, std::size_t>> guards_;
  std::vector<std::pair<std::string, std::size_t>> guard_log_;
  std::size_t predicate_depth_ = 0;
  bool in_recovery_ = false;
  std::size_t farthest_ = 0;
  std::set<std::string> farthest_expected_;
};

// Message for a label that reached the top: the grammar message, else the
// default derived from the throw site that raised it.
std::string top_message(const Compiled& impl, std::string_view label) {
  auto it = impl.grammar.messages.find(std::string(label));
  if (it != impl.grammar.messages.end()) return it->second;
  std::string expected;
  auto find_throw = [&](const Expr& root) {
    for_each_node(root, [&](const Expr& n) {
      if (expected.empty() && n.op == Op::Throw && n.name == label) expected = n.expected;
    });
  };
  for (const auto& r : impl.grammar.syntactic) find_throw(*r.body);
  return expected.empty() ? std::string(label) : default_message(impl.grammar, expected);
}

}  // namespace

struct Parser::Impl : Compiled {
  using Compiled::Compiled;
};

Parser::Parser(const Grammar& g) : impl_(std::make_unique<Impl>(g)) {}
Parser::~Parser() = default;
Parser::Parser(Parser&&) noexcept = default;
Parser& Parser::operator=(Parser&&) noexcept = default;

const Grammar& Parser::grammar() const { return impl_->grammar; }

ParseOutcome Parser::parse(std::string_view input, const ParseOptions& opts) const {
  Session session(*impl_, input, opts);
  ParseOutcome out;
  Expr start;
  start.op = Op::NonTerminal;
  start.name = impl_->grammar.start;

  try {
    Session::Result r = session.eval(start, 0);
    if (r.ok) {
      out.status = ParseStatus::Matched;
      out.end = r.pos;
      out.tree = std::move(session.nodes().back());
      const Token& rest = session.lexer().next(r.pos);
      if (rest.kind != kEof) {
        std::string msg = "unexpected '" + std::string(session.lexer().spelling(rest)) + "', expected end of input";
        session.errors().push_back(session.make_error(kFail, r.pos, std::move(msg)));
      }
    } else if (r.label != kFail) {
      out.failure_label = std::string(r.label);
      out.failure_pos = r.pos;
      session.errors().push_back(session.make_error(r.label, r.pos, top_message(*impl_, r.label)));
    } else {
      out.failure_label = std::string(kFail);
      out.failure_pos = session.farthest();
      session.errors().push_back(session.make_error(kFail, session.farthest(), session.farthest_message()));
    }
  } catch (const TooManyErrors&) {
    out.status = ParseStatus::Failed;
    out.failure_label = "max-errors";
    out.tree.reset();
  }

  out.errors = std::move(session.errors());
  for (auto& e : out.errors) e.token_index = session.lexer().tokens_before(e.position.offset);
  return out;
}

MatchResult Parser::match(const Expr& e, std::string_view input, std::size_t pos, const ParseOptions& opts) const {
  Session session(*impl_, input, opts);
  try {
    Session::Result r = session.eval(e, pos);
    return {r.ok, r.pos, std::string(r.label)};
  } catch (const TooManyErrors&) {
    return {false, pos, "max-errors"};
  }
}

std::vector<Token> Parser::tokenize(std::string_view input) const {
  Lexer lexer(impl_->tokens, input);
  std::vector<Token> out;
  std::size_t at = 0;
  while (true) {
    const Token& t = lexer.next(at);
    if (t.kind == kEof) return out;
    out.push_back(t);
    at = t.span.end;
  }
}

}  // namespace pegrec
