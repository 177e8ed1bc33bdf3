#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pegrec/grammar.hpp"

namespace fixtures {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(PEGREC_TEST_DATA) / name;
}

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("missing test file " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string data(const std::string& name) { return read(data_path(name)); }

inline pegrec::Grammar tiny_java() { return pegrec::parse_grammar(data("tiny_java.peg")); }
inline pegrec::Grammar tiny_java_labeled() { return pegrec::parse_grammar(data("tiny_java_labeled.peg")); }

}  // namespace fixtures
