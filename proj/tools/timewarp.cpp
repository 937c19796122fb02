// Command-line front end: decide, normalize, saturate, emit-smt, fuzz.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "timewarp/constraints.hpp"
#include "timewarp/errors.hpp"
#include "timewarp/fuzz.hpp"
#include "timewarp/normalize.hpp"
#include "timewarp/parser.hpp"
#include "timewarp/pipeline.hpp"
#include "timewarp/saturate.hpp"

namespace tw = timewarp;

namespace {

constexpr int kExitValid = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitError = 2;

struct Settings {
  bool json = false;
  bool trace = false;
  std::size_t budget_nodes = tw::NormalizeOptions{}.node_budget;
  std::size_t budget_samples = tw::SaturateOptions{}.sample_budget;
  std::size_t budget_conflicts = tw::DecideOptions{}.conflict_budget;
  unsigned threads = 0;
  std::string external_solver;

  tw::DecideOptions decide_options() const {
    tw::DecideOptions o;
    o.normalize.node_budget = budget_nodes;
    o.saturate.sample_budget = budget_samples;
    o.conflict_budget = budget_conflicts;
    o.threads = threads;
    o.trace = trace;
    o.external_solver = external_solver;
    return o;
  }
};

// A path to a readable file yields its queries; anything else is parsed as a
// single query.
std::vector<tw::Query> load_queries(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return tw::parse_queries(ss.str());
  }
  return {tw::parse_query(arg)};
}

std::string combine_scripts(const std::vector<std::string>& scripts) {
  if (scripts.size() == 1) return scripts[0];
  // One script, one push/pop frame per goal.
  std::string out = "(set-logic QF_LIA)\n";
  for (std::size_t i = 0; i < scripts.size(); ++i) {
    std::string body = scripts[i].substr(scripts[i].find('\n') + 1);
    out += "; goal " + std::to_string(i) + "\n(push 1)\n" + body + "(pop 1)\n";
  }
  return out;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int cmd_decide(const Settings& s, const std::string& input, const std::string& emit_smt) {
  std::vector<tw::Query> queries = load_queries(input);
  tw::DecideOptions opts = s.decide_options();
  bool any_invalid = false;
  nlohmann::json all = nlohmann::json::array();
  std::vector<std::string> scripts;
  for (const tw::Query& q : queries) {
    tw::Verdict v = tw::decide(q, opts);
    any_invalid |= !v.valid;
    if (!emit_smt.empty()) {
      std::vector<std::string> g = tw::goal_scripts(q, opts);
      scripts.insert(scripts.end(), g.begin(), g.end());
    }
    if (s.json) {
      nlohmann::json j = tw::to_json(v);
      j["query"] = tw::print(q);
      all.push_back(std::move(j));
    } else {
      if (queries.size() > 1) std::cout << tw::print(q) << ": ";
      std::cout << tw::to_string(v) << "\n";
      if (s.trace)
        for (const tw::GoalReport& g : v.goals) std::cout << g.trace;
    }
  }
  if (s.json) std::cout << (queries.size() == 1 ? all[0] : all).dump(2) << "\n";
  if (!emit_smt.empty() && !scripts.empty() && !write_file(emit_smt, combine_scripts(scripts)))
    return kExitError;
  return any_invalid ? kExitInvalid : kExitValid;
}

int cmd_normalize(const Settings& s, const std::string& input) {
  tw::NormalizeOptions opts;
  opts.node_budget = s.budget_nodes;
  nlohmann::json all = nlohmann::json::array();
  for (const tw::Query& q : load_queries(input)) {
    std::vector<std::pair<int, tw::Query>> goals = tw::goal_list(q, opts);
    if (s.json) {
      nlohmann::json g = nlohmann::json::array();
      for (const auto& [dir, goal] : goals) g.push_back({{"direction", dir}, {"goal", tw::print(goal)}});
      all.push_back({{"query", tw::print(q)}, {"goals", g}});
      continue;
    }
    std::cout << tw::print(q) << "\n";
    if (goals.empty()) std::cout << "  (no goals: id <= top)\n";
    for (const auto& [dir, goal] : goals) std::cout << "  " << tw::print(goal) << "\n";
  }
  if (s.json) std::cout << all.dump(2) << "\n";
  return kExitValid;
}

int cmd_saturate(const Settings& s, const std::string& input) {
  tw::NormalizeOptions nopts;
  nopts.node_budget = s.budget_nodes;
  tw::SaturateOptions sopts;
  sopts.sample_budget = s.budget_samples;
  nlohmann::json all = nlohmann::json::array();
  for (const tw::Query& q : load_queries(input)) {
    for (const auto& [dir, goal] : tw::goal_list(q, nopts)) {
      tw::SampleSet delta = tw::saturate_goals(goal.goals, sopts);
      if (s.json) {
        nlohmann::json samples = nlohmann::json::array();
        for (tw::SampleId id : delta.members()) samples.push_back(delta.arena().print(id));
        all.push_back({{"goal", tw::print(goal)}, {"samples", samples}});
        continue;
      }
      std::cout << tw::print(goal) << "  (" << delta.size() << " samples)\n";
      for (tw::SampleId id : delta.members()) std::cout << "  " << delta.arena().print(id) << "\n";
    }
  }
  if (s.json) std::cout << all.dump(2) << "\n";
  return kExitValid;
}

int cmd_emit_smt(const Settings& s, const std::string& input, const std::string& out) {
  std::vector<std::string> scripts;
  tw::DecideOptions opts = s.decide_options();
  for (const tw::Query& q : load_queries(input)) {
    std::vector<std::string> g = tw::goal_scripts(q, opts);
    scripts.insert(scripts.end(), g.begin(), g.end());
  }
  if (scripts.empty()) {
    std::cerr << "no goals to emit: the query normalizes to id <= top\n";
    return kExitValid;
  }
  std::string text = combine_scripts(scripts);
  if (out.empty() || out == "-") {
    std::cout << text;
    return kExitValid;
  }
  return write_file(out, text) ? kExitValid : kExitError;
}

int cmd_fuzz(const Settings& s, tw::FuzzOptions fo) {
  fo.decide = s.decide_options();
  tw::FuzzReport r = tw::fuzz(fo);
  if (s.json) {
    std::cout << tw::to_json(r).dump(2) << "\n";
  } else {
    std::cout << "queries " << r.queries << ": " << r.valid << " valid, " << r.invalid << " invalid, "
              << r.budget_exceeded << " over budget\n"
              << "oracle refuted " << r.oracle_refuted << ", agreed " << r.oracle_agreements << "\n"
              << "normalization checks " << r.normalization_checks << "\n";
    if (r.external_available)
      std::cout << "external solver agreed on " << r.external_agreements << "/" << r.external_checked
                << " goals\n";
    else
      std::cout << "external solver: not used\n";
    std::cout << "mismatches " << r.mismatches() << " (a " << r.mismatches_a << ", b " << r.mismatches_b
              << ", c " << r.mismatches_c << ", d " << r.mismatches_d << ")\n";
    for (const tw::FuzzFailure& f : r.failures)
      std::cout << "  #" << f.index << " [" << f.check << "] " << f.query << ": " << f.detail << "\n";
  }
  return r.mismatches() == 0 ? kExitValid : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure for the equational theory of time warps"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  app.add_flag("--json", s.json, "Machine-readable output");
  app.add_flag("--trace", s.trace, "Dump samples and constraint sets per goal");
  app.add_option("--budget-nodes", s.budget_nodes, "Normal-form node budget")->capture_default_str();
  app.add_option("--budget-samples", s.budget_samples, "Saturation sample budget")->capture_default_str();
  app.add_option("--budget-conflicts", s.budget_conflicts, "Solver conflict budget")->capture_default_str();
  app.add_option("--threads", s.threads, "Worker threads per query (0 = all cores)");
  app.add_option("--external-solver", s.external_solver, "SMT solver binary for cross-checks (e.g. z3)");

  std::string input, out, emit_smt;
  tw::FuzzOptions fo;

  auto* decide = app.add_subcommand("decide", "Decide queries: EXPR, or a FILE with one query per line");
  decide->add_option("query", input, "Query text or file")->required();
  decide->add_option("--emit-smt", emit_smt, "Also write the goals' SMT-LIB script to PATH");

  auto* normalize = app.add_subcommand("normalize", "Print the unit goals of a query");
  normalize->add_option("query", input, "Query text or file")->required();

  auto* saturate = app.add_subcommand("saturate", "Print the saturated sample set of each goal");
  saturate->add_option("query", input, "Query text or file")->required();

  auto* emit = app.add_subcommand("emit-smt", "Write SMT-LIB for each goal");
  emit->add_option("query", input, "Query text or file")->required();
  emit->add_option("-o,--output", out, "Output path ('-' for stdout)");

  auto* fuzz = app.add_subcommand("fuzz", "Cross-check the procedure on random queries");
  fuzz->add_option("-n", fo.queries, "Number of queries")->capture_default_str();
  fuzz->add_option("--seed", fo.seed, "Random seed")->capture_default_str();
  fuzz->add_option("--max-depth", fo.max_depth, "Term height per side")->capture_default_str();
  fuzz->add_option("--max-vars", fo.max_vars, "Variables per query")->capture_default_str();
  fuzz->add_option("--p-max", fo.p_max, "Largest finite point for the brute-force oracle")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*decide) return cmd_decide(s, input, emit_smt);
    if (*normalize) return cmd_normalize(s, input);
    if (*saturate) return cmd_saturate(s, input);
    if (*emit) return cmd_emit_smt(s, input, out);
    if (*fuzz) return cmd_fuzz(s, fo);
  } catch (const tw::ParseError& e) {
    std::cerr << e.what() << "\n";
  } catch (const tw::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
