#include "oracles.hpp"

#include <functional>

namespace oracle {

using pegrec::Expr;
using pegrec::ExprPtr;
using pegrec::Op;

NaiveRecognizer::Result NaiveRecognizer::run(const Expr& e, const std::vector<std::string>& input, std::size_t pos) {
  input_ = &input;
  predicates_ = 0;
  consumed_first_ = false;
  return eval(e, pos);
}

NaiveRecognizer::Result NaiveRecognizer::run_rule(const std::string& rule, const std::vector<std::string>& input,
                                                  std::size_t pos) {
  return run(*g_.find_syntactic(rule)->body, input, pos);
}

NaiveRecognizer::Result NaiveRecognizer::eval(const Expr& e, std::size_t pos) {
  const auto& in = *input_;
  auto fail = [&] { return Result{false, pos, "fail"}; };
  switch (e.op) {
    case Op::Empty:
      return {true, pos, ""};
    case Op::Terminal:
      if (e.name == "EOF") return pos == in.size() ? Result{true, pos, ""} : fail();
      if (pos < in.size() && in[pos] == e.name) {
        if (pos == 0 && predicates_ == 0) consumed_first_ = true;
        return {true, pos + 1, ""};
      }
      return fail();
    case Op::AnyToken:
      if (pos < in.size()) return {true, pos + 1, ""};
      return fail();
    case Op::NonTerminal:
      return eval(*g_.find_syntactic(e.name)->body, pos);
    case Op::Sequence: {
      Result l = eval(*e.kids[0], pos);
      if (!l.ok) return l;
      return eval(*e.kids[1], l.pos);
    }
    case Op::Choice:
    case Op::Annotated: {
      Result l = eval(*e.kids[0], pos);
      if (l.ok || l.label != "fail") return l;
      if (e.op == Op::Annotated) return {false, pos, e.name};
      return eval(*e.kids[1], pos);
    }
    case Op::Optional: {
      Result l = eval(*e.kids[0], pos);
      if (l.ok || l.label != "fail") return l;
      return {true, pos, ""};
    }
    case Op::Star:
    case Op::Plus: {
      std::size_t at = pos;
      if (e.op == Op::Plus) {
        Result once = eval(*e.kids[0], at);
        if (!once.ok) return once;
        at = once.pos;
      }
      for (;;) {
        Result r = eval(*e.kids[0], at);
        if (!r.ok) {
          if (r.label != "fail") return r;
          return {true, at, ""};
        }
        if (r.pos == at) return {true, at, ""};
        at = r.pos;
      }
    }
    case Op::Not:
    case Op::And: {
      ++predicates_;
      Result r = eval(*e.kids[0], pos);
      --predicates_;
      bool ok = e.op == Op::Not ? !r.ok : r.ok;
      return ok ? Result{true, pos, ""} : fail();
    }
    case Op::Throw:
      return {false, pos, e.name};
    default:
      throw std::logic_error("naive recognizer: unsupported expression");
  }
}

std::vector<std::string> first_by_probing(const pegrec::Grammar& g, const Expr& e) {
  NaiveRecognizer nr(g);
  std::vector<std::string> out;
  for (const auto& kind : g.token_kinds()) {
    nr.run(e, {kind});
    if (nr.consumed_first()) out.push_back(kind);
  }
  return out;
}

namespace {

struct GrammarBuilder {
  std::mt19937_64& rng;
  int rules;
  int max_depth;
  std::vector<std::string> tokens{"'a'", "'b'", "'c'"};

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  ExprPtr leaf() {
    int k = pick(10);
    if (k < 6) return pegrec::terminal(tokens[pick(3)]);
    if (k < 9) return pegrec::nonterminal("s" + std::to_string(pick(rules)));
    return pegrec::empty();
  }

  ExprPtr expr(int depth) {
    if (depth >= max_depth) return leaf();
    switch (pick(9)) {
      case 0:
      case 1:
        return pegrec::seq(expr(depth + 1), expr(depth + 1));
      case 2:
      case 3:
        return pegrec::choice(expr(depth + 1), expr(depth + 1));
      case 4:
        return pegrec::star(expr(depth + 1));
      case 5:
        return pegrec::not_(expr(depth + 1));
      case 6:
        return pegrec::optional(expr(depth + 1));
      default:
        return leaf();
    }
  }
};

}  // namespace

pegrec::Grammar random_grammar(std::mt19937_64& rng, int max_rules, int max_depth) {
  for (;;) {
    int rules = std::uniform_int_distribution<int>(1, max_rules)(rng);
    GrammarBuilder b{rng, rules, max_depth};
    pegrec::Grammar g;
    for (int i = 0; i < rules; ++i) g.syntactic.push_back({"s" + std::to_string(i), b.expr(0), {}});
    try {
      pegrec::validate(g);
      return g;
    } catch (const pegrec::GrammarError&) {
      // left recursion or an unused-token issue; draw again
    }
  }
}

std::vector<std::vector<std::string>> all_inputs(const std::vector<std::string>& alphabet, std::size_t max_len) {
  std::vector<std::vector<std::string>> out{{}};
  std::size_t from = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i) {
      for (const auto& a : alphabet) {
        auto next = out[i];
        next.push_back(a);
        out.push_back(std::move(next));
      }
    }
    from = to;
  }
  return out;
}

std::string render_literals(const std::vector<std::string>& kinds) {
  std::string out;
  for (const auto& k : kinds) {
    if (!out.empty()) out += ' ';
    out += k.substr(1, k.size() - 2);
  }
  return out;
}

namespace {

class JavaGen {
 public:
  JavaGen(std::mt19937_64& rng, int max_depth) : rng_(rng), max_depth_(max_depth) {}

  std::string program() {
    std::string out = "public class " + name() + " {\n  public static void main(String[] " + name() + ") ";
    out += block(0, 2);
    out += "\n}\n";
    return out;
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string name() {
    static const char* names[] = {"x", "y", "n", "count", "total", "i", "publicity", "whiles", "ifx", "integer"};
    return names[pick(10)];
  }

  std::string indent(int level) { return std::string(static_cast<std::size_t>(level) * 2, ' '); }

  std::string block(int depth, int level) {
    std::string out = "{\n";
    int n = pick(depth >= max_depth_ ? 2 : 4);
    for (int i = 0; i < n; ++i) out += indent(level + 1) + stmt(depth + 1, level + 1) + "\n";
    return out + indent(level) + "}";
  }

  std::string stmt(int depth, int level) {
    int k = depth >= max_depth_ ? 3 + pick(3) : pick(7);
    switch (k) {
      case 0: {
        std::string out = "if (" + exp(depth) + ") " + stmt(depth + 1, level);
        if (pick(2)) out += " else " + stmt(depth + 1, level);
        return out;
      }
      case 1:
        return "while (" + exp(depth) + ") " + stmt(depth + 1, level);
      case 2:
        return block(depth, level);
      case 3:
        return "System.out.println(" + exp(depth) + ");";
      case 4:
        return "int " + name() + (pick(2) ? " = " + exp(depth) : std::string()) + ";";
      default:
        return name() + " = " + exp(depth) + ";";
    }
  }

  std::string exp(int depth) {
    static const char* ops[] = {" == ", " < ", " + ", " - ", " * ", " / "};
    std::string out = atom(depth);
    int n = pick(3);
    for (int i = 0; i < n; ++i) out += ops[pick(6)] + atom(depth);
    return out;
  }

  std::string atom(int depth) {
    int k = depth >= max_depth_ ? 1 + pick(2) : pick(4);
    if (k == 0) return "(" + exp(depth + 1) + ")";
    if (k == 1) return std::to_string(pick(1000));
    return name();
  }

  std::mt19937_64& rng_;
  int max_depth_;
};

}  // namespace

std::string random_tiny_java(std::mt19937_64& rng, int max_depth) { return JavaGen(rng, max_depth).program(); }

}  // namespace oracle
