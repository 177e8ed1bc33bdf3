#include "pegrec/diagnostics.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pegrec {

std::string display_kind(const Grammar& g, std::string_view kind) {
  if (is_literal_kind(kind)) return std::string(kind);
  if (const Rule* r = g.find_lexical(kind); r && r->body->op == Op::Literal)
    return literal_kind(r->body->name);
  if (kind == kEof) return "end of input";
  return std::string(kind);
}

std::string default_message(const Grammar& g, std::string_view expected) {
  std::string out = "expected ";
  bool first = true;
  std::size_t start = 0;
  while (true) {
    std::size_t cut = expected.find(" / ", start);
    std::string_view part = expected.substr(start, cut == std::string_view::npos ? cut : cut - start);
    if (!first) out += " or ";
    first = false;
    out += display_kind(g, part);
    if (cut == std::string_view::npos) break;
    start = cut + 3;
  }
  return out;
}

MessageMap parse_messages(std::string_view json_text, const Grammar& g) {
  MessageMap map{g.messages, {}};
  if (json_text.find_first_not_of(" \t\r\n") == std::string_view::npos) return map;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GrammarError("malformed message file at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw GrammarError("message file must be a JSON object");
  for (const auto& [label, text] : j.items()) {
    if (!text.is_string()) throw GrammarError("message for " + label + " is not a string");
    if (!g.has_label(label)) {
      map.warnings.push_back("message for undeclared label " + label + " ignored");
      continue;
    }
    map.messages[label] = text.get<std::string>();
  }
  return map;
}

MessageMap load_messages(const std::filesystem::path& path, const Grammar& g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GrammarError("cannot read message file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_messages(buf.str(), g);
}

void install_messages(Grammar& g, const MessageMap& map) {
  for (const auto& [label, text] : map.messages) g.messages[label] = text;
}

std::string format_error(std::string_view file, const SyntaxError& e) {
  return std::string(file) + ":" + std::to_string(e.position.line) + ": syntax error, " + e.message;
}

std::vector<SyntaxError> suppress_cascaded(const std::vector<SyntaxError>& errors, std::size_t distance) {
  std::vector<SyntaxError> kept;
  for (const auto& e : errors) {
    if (!kept.empty() && e.token_index < kept.back().token_index + distance) continue;
    kept.push_back(e);
  }
  return kept;
}

}  // namespace pegrec
