#include "pegrec/lexer.hpp"

#include <algorithm>

#include "pegrec/utf8.hpp"

namespace pegrec {

TokenRules::TokenRules(const Grammar& g) {
  for (const auto& kind : g.literal_kinds()) entries_.push_back({kind, literal_text(kind), nullptr});
  for (const auto& r : g.lexical) {
    ExprPtr body = desugar(r.body);
    keep_alive_.push_back(body);
    rules_[r.name] = body.get();
    entries_.push_back({r.name, {}, body.get()});
  }
}

std::optional<Token> TokenRules::longest_match(std::string_view text, std::size_t offset) const {
  std::optional<Token> best;
  for (const auto& entry : entries_) {
    std::optional<std::size_t> end;
    if (entry.pattern) {
      end = match_chars(*entry.pattern, text, offset);
    } else if (!entry.literal.empty() && text.substr(offset).starts_with(entry.literal)) {
      end = offset + entry.literal.size();
    }
    if (end && *end > offset && (!best || *end > best->span.end)) best = Token{entry.kind, {offset, *end}};
  }
  return best;
}

std::optional<std::size_t> TokenRules::match_chars(const Expr& e, std::string_view text, std::size_t pos) const {
  switch (e.op) {
    case Op::Empty:
      return pos;
    case Op::Literal:
      if (text.substr(pos).starts_with(e.name)) return pos + e.name.size();
      return std::nullopt;
    case Op::CharClass: {
      if (pos >= text.size()) return std::nullopt;
      std::size_t len = 0;
      char32_t c = decode_utf8(text, pos, len);
      bool in = std::any_of(e.ranges.begin(), e.ranges.end(), [&](const CharRange& r) { return r.lo <= c && c <= r.hi; });
      if (in == e.negated) return std::nullopt;
      return pos + len;
    }
    case Op::AnyToken:
      if (pos >= text.size()) return std::nullopt;
      return pos + utf8_length(text, pos);
    case Op::NonTerminal: {
      auto it = rules_.find(e.name);
      if (it == rules_.end()) return std::nullopt;
      return match_chars(*it->second, text, pos);
    }
    case Op::Sequence: {
      auto mid = match_chars(e.kid(0), text, pos);
      if (!mid) return std::nullopt;
      return match_chars(e.kid(1), text, *mid);
    }
    case Op::Choice: {
      if (auto first = match_chars(e.kid(0), text, pos)) return first;
      return match_chars(e.kid(1), text, pos);
    }
    case Op::Star: {
      while (true) {
        auto next = match_chars(e.kid(), text, pos);
        if (!next || *next == pos) return pos;
        pos = *next;
      }
    }
    case Op::Not:
      if (match_chars(e.kid(), text, pos)) return std::nullopt;
      return pos;
    default:
      return std::nullopt;
  }
}

Lexer::Lexer(const TokenRules& rules, std::string_view text) : rules_(rules), text_(text) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == '\n') line_starts_.push_back(i + 1);
}

std::size_t Lexer::skip_trivia(std::size_t offset) const {
  while (offset < text_.size()) {
    char c = text_[offset];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++offset;
    } else if (c == '/' && offset + 1 < text_.size() && text_[offset + 1] == '/') {
      while (offset < text_.size() && text_[offset] != '\n') ++offset;
    } else {
      break;
    }
  }
  return offset;
}

const Token& Lexer::next(std::size_t offset) {
  if (auto it = memo_.find(offset); it != memo_.end()) return it->second;
  std::size_t start = skip_trivia(offset);
  Token tok{kEof, {start, start}};
  if (start < text_.size()) {
    if (auto m = rules_.longest_match(text_, start)) tok = *m;
    else tok = Token{kUnknownToken, {start, start + utf8_length(text_, start)}};
  }
  return memo_.emplace(offset, tok).first->second;
}

std::size_t Lexer::tokens_before(std::size_t offset) {
  std::size_t count = 0;
  std::size_t at = 0;
  while (true) {
    const Token& t = next(at);
    if (t.kind == kEof || t.span.end > offset) return count;
    ++count;
    at = t.span.end;
  }
}

Position Lexer::position(std::size_t offset) const {
  offset = std::min(offset, text_.size());
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
  std::size_t column = 1;
  for (std::size_t i = line_starts_[line - 1]; i < offset; i += utf8_length(text_, i)) ++column;
  return {offset, line, column};
}

}  // namespace pegrec
