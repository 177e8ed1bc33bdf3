#include "pegrec/parse_tree.hpp"

#include <stdexcept>

namespace pegrec {

ParseTree ParseTree::rule(std::string name, Span span, std::vector<ParseTree> children) {
  return {NodeKind::Rule, std::move(name), {}, span, std::move(children)};
}

ParseTree ParseTree::token(std::string kind, Span span) { return {NodeKind::Token, std::move(kind), {}, span, {}}; }

ParseTree ParseTree::error(std::string label, std::string expected, Span span) {
  return {NodeKind::Error, std::move(label), std::move(expected), span, {}};
}

std::size_t ParseTree::count(NodeKind k) const {
  std::size_t n = kind == k ? 1 : 0;
  for (const auto& c : children) n += c.count(k);
  return n;
}

nlohmann::json to_json(const ParseTree& t) {
  nlohmann::json span = {t.span.begin, t.span.end};
  switch (t.kind) {
    case NodeKind::Token:
      return {{"token", t.name}, {"span", span}};
    case NodeKind::Error:
      return {{"error", t.name}, {"expected", t.expected}, {"span", span}};
    case NodeKind::Rule:
      break;
  }
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : t.children) children.push_back(to_json(c));
  return {{"rule", t.name}, {"span", span}, {"children", children}};
}

ParseTree tree_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("span")) throw std::invalid_argument("tree node must be an object with a span");
  Span span{j.at("span").at(0).get<std::size_t>(), j.at("span").at(1).get<std::size_t>()};
  if (j.contains("token")) return ParseTree::token(j["token"].get<std::string>(), span);
  if (j.contains("error"))
    return ParseTree::error(j["error"].get<std::string>(), j.value("expected", std::string{}), span);
  if (!j.contains("rule")) throw std::invalid_argument("tree node needs one of rule/token/error");
  std::vector<ParseTree> children;
  for (const auto& c : j.value("children", nlohmann::json::array())) children.push_back(tree_from_json(c));
  return ParseTree::rule(j["rule"].get<std::string>(), span, std::move(children));
}

nlohmann::json to_json(const SyntaxError& e) {
  return {{"label", e.label},
          {"offset", e.position.offset},
          {"line", e.position.line},
          {"column", e.position.column},
          {"message", e.message}};
}

}  // namespace pegrec
