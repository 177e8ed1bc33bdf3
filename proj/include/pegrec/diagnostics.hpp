#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pegrec/grammar.hpp"
#include "pegrec/parse_tree.hpp"

namespace pegrec {

/// How a token kind is spelled in messages: 'x' for literal tokens and for
/// lexical rules that are a single literal, the rule or kind name otherwise.
std::string display_kind(const Grammar& g, std::string_view kind);

/// "expected <desc>" for a describe() string; alternatives joined with "or".
std::string default_message(const Grammar& g, std::string_view expected);

struct MessageMap {
  std::map<std::string, std::string> messages;
  std::vector<std::string> warnings;
};

/// Parses a flat JSON object label -> message and merges it over the
/// grammar's messages. Entries for labels the grammar does not declare are
/// reported as warnings and dropped. Malformed input throws GrammarError
/// carrying the byte offset.
MessageMap parse_messages(std::string_view json_text, const Grammar& g);
MessageMap load_messages(const std::filesystem::path& path, const Grammar& g);

/// Installs a message map into the grammar (overriding existing entries).
void install_messages(Grammar& g, const MessageMap& map);

/// "<file>:<line>: syntax error, <message>"
std::string format_error(std::string_view file, const SyntaxError& e);

/// Drops every error that is fewer than `distance` tokens after the last
/// retained one. The first error is always kept.
std::vector<SyntaxError> suppress_cascaded(const std::vector<SyntaxError>& errors, std::size_t distance);

}  // namespace pegrec
