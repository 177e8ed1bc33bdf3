// Command-line front end: annotate, analyze, parse, eval, mutate.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pegrec/analysis.hpp"
#include "pegrec/annotator.hpp"
#include "pegrec/diagnostics.hpp"
#include "pegrec/engine.hpp"
#include "pegrec/evaluator.hpp"
#include "pegrec/grammar.hpp"
#include "pegrec/mutate.hpp"

namespace fs = std::filesystem;
using namespace pegrec;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Grammar load_grammar(const std::string& path) {
  try {
    return parse_grammar(read_file(path));
  } catch (const GrammarError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.insert(item);
  return out;
}

struct AnnotateFlags {
  bool preserve = false;
  std::string star_rules;
  std::string prefix = "Err";

  void add_to(CLI::App* cmd) {
    cmd->add_flag("--preserve", preserve, "Keep existing labels, add recovery where missing");
    cmd->add_option("--star-rules", star_rules, "Comma-separated rules whose repetitions get labeled");
    cmd->add_option("--prefix", prefix, "Prefix for generated label names");
  }

  Annotation run(const Grammar& g) const {
    AnnotatorConfig cfg;
    cfg.preserve_existing = preserve;
    cfg.star_mode_rules = split_list(star_rules);
    cfg.label_prefix = prefix;
    return annotate(g, cfg);
  }
};

void apply_messages(Grammar& g, const std::string& path) {
  if (path.empty()) return;
  MessageMap map;
  try {
    map = load_messages(path, g);
  } catch (const GrammarError& e) {
    throw UsageError(path + ": " + e.what());
  }
  for (const auto& w : map.warnings) std::cerr << path << ": warning: " << w << "\n";
  install_messages(g, map);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Labeled-failure PEG toolkit: annotation, recovery parsing, evaluation"};
  app.require_subcommand(1);

  // annotate
  auto* ann = app.add_subcommand("annotate", "Insert labels and recovery expressions");
  std::string ann_grammar, ann_out = "-", ann_report;
  AnnotateFlags ann_flags;
  ann->add_option("grammar", ann_grammar)->required();
  ann->add_option("-o,--output", ann_out, "Output grammar ('-' for stdout)");
  ann->add_option("--report", ann_report, "Write the inserted/skipped site report as JSON");
  ann_flags.add_to(ann);

  // analyze
  auto* ana = app.add_subcommand("analyze", "Print FIRST or FOLLOW of a rule");
  std::string ana_grammar, ana_first, ana_follow;
  ana->add_option("grammar", ana_grammar)->required();
  auto* first_opt = ana->add_option("--first", ana_first, "Rule whose FIRST set to print");
  auto* follow_opt = ana->add_option("--follow", ana_follow, "Rule whose FOLLOW set to print");
  first_opt->excludes(follow_opt);
  follow_opt->excludes(first_opt);

  // parse
  auto* par = app.add_subcommand("parse", "Parse an input with error recovery");
  std::string par_grammar, par_input, par_messages, par_tree;
  std::size_t par_suppress = 0, par_max_errors = 50;
  bool par_no_recovery = false, par_json = false, par_annotate = false;
  AnnotateFlags par_flags;
  par->add_option("grammar", par_grammar)->required();
  par->add_option("input", par_input)->required();
  par->add_option("--messages", par_messages, "JSON map label -> message");
  par->add_option("--suppress-within", par_suppress, "Drop errors fewer than N tokens after the last one");
  par->add_option("--max-errors", par_max_errors, "Stop after this many errors")->check(CLI::PositiveNumber);
  par->add_flag("--no-recovery", par_no_recovery, "Ignore recovery expressions");
  par->add_option("--tree", par_tree, "Write the parse tree as JSON ('-' for stdout)");
  par->add_flag("--json", par_json, "Print errors as JSON");
  par->add_flag("--annotate", par_annotate, "Annotate the grammar before parsing");
  par_flags.add_to(par);

  // eval
  auto* ev = app.add_subcommand("eval", "Rate recovery over a corpus of erroneous programs");
  std::string ev_grammar, ev_dir, ev_messages;
  bool ev_json = false, ev_annotate = false;
  AnnotateFlags ev_flags;
  ev->add_option("grammar", ev_grammar)->required();
  ev->add_option("corpus", ev_dir)->required();
  ev->add_option("--messages", ev_messages, "JSON map label -> message");
  ev->add_flag("--json", ev_json, "Print the summary as JSON");
  ev->add_flag("--annotate", ev_annotate, "Annotate the grammar before evaluating");
  ev_flags.add_to(ev);

  // mutate
  auto* mut = app.add_subcommand("mutate", "Write single-token mutants of a valid program as a corpus");
  std::string mut_grammar, mut_program, mut_dir;
  std::size_t mut_random = 0;
  std::uint64_t mut_seed = 1;
  bool mut_all = false;
  AnnotateFlags mut_flags;
  mut->add_option("grammar", mut_grammar, "Unannotated grammar")->required();
  mut->add_option("program", mut_program)->required();
  mut->add_option("-o,--output", mut_dir, "Corpus directory")->required();
  mut->add_option("--random", mut_random, "Write N random delete/duplicate mutants instead");
  mut->add_option("--seed", mut_seed, "First seed for random mutants");
  mut->add_flag("--all", mut_all, "Keep mutants whose error is only detectable later");
  mut_flags.add_to(mut);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ann) {
      Annotation a = ann_flags.run(load_grammar(ann_grammar));
      for (const auto& note : a.report.notes) std::cerr << "note: " << note << "\n";
      write_file(ann_out, serialize_grammar(a.grammar));
      if (!ann_report.empty()) write_file(ann_report, report_to_json(a.grammar, a.report).dump(2) + "\n");
      return 0;
    }

    if (*ana) {
      if (ana_first.empty() && ana_follow.empty()) throw UsageError("analyze needs --first or --follow");
      Grammar g = desugar(load_grammar(ana_grammar));
      SetAnalysis sets(g);
      const std::string& rule = ana_first.empty() ? ana_follow : ana_first;
      if (!g.find_syntactic(rule)) throw UsageError("no syntactic rule " + rule);
      const TokenSet& s = ana_first.empty() ? sets.follow(rule) : sets.first_of_rule(rule);
      for (const auto& kind : ordered_kinds(g, s)) std::cout << kind << "\n";
      if (s.has_epsilon()) std::cout << "ε\n";
      return 0;
    }

    if (*par) {
      Grammar g = load_grammar(par_grammar);
      if (par_annotate) g = par_flags.run(g).grammar;
      apply_messages(g, par_messages);
      Parser parser(g);
      ParseOptions opts;
      opts.max_errors = par_max_errors;
      opts.use_recovery = !par_no_recovery;
      ParseOutcome out = parser.parse(read_file(par_input), opts);
      std::vector<SyntaxError> errors = suppress_cascaded(out.errors, par_suppress);
      if (par_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& e : errors) j.push_back(to_json(e));
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& e : errors) std::cout << format_error(par_input, e) << "\n";
      }
      if (!par_tree.empty() && out.tree) write_file(par_tree, to_json(*out.tree).dump(2) + "\n");
      return out.clean() ? 0 : 1;
    }

    if (*ev) {
      Grammar g = load_grammar(ev_grammar);
      if (ev_annotate) g = ev_flags.run(g).grammar;
      apply_messages(g, ev_messages);
      Parser parser(g);
      CorpusSummary s = run_corpus(parser, load_corpus(ev_dir));
      if (ev_json) std::cout << summary_to_json(s).dump(2) << "\n";
      else std::cout << format_summary(s);
      return s.exit_status();
    }

    if (*mut) {
      Annotation a = mut_flags.run(load_grammar(mut_grammar));
      Parser parser(a.grammar);
      std::string program = read_file(mut_program);
      std::vector<Mutant> mutants;
      if (mut_random > 0) {
        for (std::size_t i = 0; i < mut_random; ++i)
          if (auto m = random_mutant(parser, program, mut_seed + i)) mutants.push_back(*m);
      } else {
        DeletionOptions dopts;
        dopts.require_local_detection = !mut_all;
        mutants = labeled_deletions(parser, program, dopts);
      }
      fs::create_directories(mut_dir);
      std::string stem = fs::path(mut_program).stem().string();
      for (std::size_t i = 0; i < mutants.size(); ++i) {
        char num[16];
        std::snprintf(num, sizeof num, "%02zu", i + 1);
        std::string base = (fs::path(mut_dir) / (stem + "_" + num)).string();
        write_file(base + ".bad", mutants[i].text);
        write_file(base + ".ok", program);
        if (!mutants[i].label.empty()) write_file(base + ".label", mutants[i].label + "\n");
        std::cout << base << ".bad: " << mutants[i].description << "\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "pegrec: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "pegrec: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
