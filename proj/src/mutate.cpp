#include "pegrec/mutate.hpp"

#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace pegrec {

std::vector<Mutant> labeled_deletions(const Parser& annotated, std::string_view program,
                                      const DeletionOptions& opts) {
  std::vector<SiteHit> hits;
  ParseOptions popts;
  popts.site_trace = &hits;
  ParseOutcome outcome = annotated.parse(program, popts);
  if (!outcome.clean()) throw std::invalid_argument("program to mutate does not parse cleanly");

  std::vector<Token> tokens = annotated.tokenize(program);
  std::map<std::size_t, std::size_t> index_of;
  for (std::size_t i = 0; i < tokens.size(); ++i) index_of[tokens[i].span.begin] = i;

  ParseOptions plain;
  plain.use_recovery = false;

  std::vector<Mutant> out;
  std::set<std::size_t> seen;
  for (const auto& hit : hits) {
    if (hit.tokens != 1 || !seen.insert(hit.span.begin).second) continue;
    Mutant m;
    m.text = std::string(program.substr(0, hit.span.begin)) + " " + std::string(program.substr(hit.span.end));
    if (opts.require_local_detection) {
      // Errors are reported at the end of the last good token.
      std::size_t i = index_of.at(hit.span.begin);
      std::size_t at = i == 0 ? 0 : tokens[i - 1].span.end;
      ParseOutcome probe = annotated.parse(m.text, plain);
      if (probe.matched() || probe.failure_pos != at) continue;
    }
    m.label = hit.label;
    m.removed = hit.span;
    m.description = "delete '" + std::string(program.substr(hit.span.begin, hit.span.end - hit.span.begin)) +
                    "' at offset " + std::to_string(hit.span.begin);
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<Mutant> random_mutant(const Parser& parser, std::string_view program, std::uint64_t seed) {
  std::vector<Token> tokens = parser.tokenize(program);
  if (tokens.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  std::size_t i = std::uniform_int_distribution<std::size_t>(0, tokens.size() - 1)(rng);
  bool duplicate = std::bernoulli_distribution(0.5)(rng);
  const Span span = tokens[i].span;
  std::string spelling(program.substr(span.begin, span.end - span.begin));

  Mutant m;
  m.removed = duplicate ? Span{span.end, span.end} : span;
  if (duplicate) {
    m.text = std::string(program.substr(0, span.end)) + " " + spelling + std::string(program.substr(span.end));
    m.description = "duplicate '" + spelling + "' at offset " + std::to_string(span.begin);
  } else {
    m.text = std::string(program.substr(0, span.begin)) + " " + std::string(program.substr(span.end));
    m.description = "delete '" + spelling + "' at offset " + std::to_string(span.begin);
  }
  m.description += " (seed " + std::to_string(seed) + ")";
  return m;
}

}  // namespace pegrec
