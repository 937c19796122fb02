#include "timewarp/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "timewarp/constraints.hpp"
#include "timewarp/errors.hpp"

namespace timewarp {

std::vector<std::pair<int, Query>> goal_list(const Query& q, const NormalizeOptions& opts) {
  std::vector<std::pair<int, Query>> out;
  auto add = [&](int dir, const Query& ineq) {
    for (Query& g : unit_goals(residuate(ineq).rhs, opts)) out.emplace_back(dir, std::move(g));
  };
  switch (q.kind) {
    case Query::Kind::UnitGoal: out.emplace_back(0, q); break;
    case Query::Kind::Inequation: add(0, q); break;
    case Query::Kind::Equation: {
      auto [a, b] = split_equation(q);
      add(0, a);
      add(1, b);
      break;
    }
  }
  return out;
}

bool refutes(const Query& q, const Valuation& theta, ExtNat p) {
  switch (q.kind) {
    case Query::Kind::UnitGoal: return verify(theta, p, q.goals);
    case Query::Kind::Inequation: return interpret(residuate(q).rhs, theta)(p) < p;
    case Query::Kind::Equation: {
      auto [a, b] = split_equation(q);
      return refutes(a, theta, p) || refutes(b, theta, p);
    }
  }
  return false;
}

namespace {

// Monotonicity is quadratic in the samples of each term, yet nearly all of
// it holds in the first models the solver finds. Those clauses are handed
// over only once a candidate model breaks them.
bool held_back(const PsiClause& c) { return c.condition == 1; }

struct Artifacts {
  std::shared_ptr<SampleArena> arena;
  SampleSet delta{nullptr};
  std::vector<SampleId> goal_samples;
  Psi psi;
  SigmaFormula eager = SigmaFormula::truth();
  std::vector<const PsiClause*> lazy;
};

Artifacts build(const Query& goal, const DecideOptions& opts) {
  Artifacts a;
  a.delta = saturate_goals(goal.goals, opts.saturate, &a.goal_samples);
  a.arena = a.delta.arena_ptr();
  a.psi = build_psi(a.delta, a.goal_samples);
  std::vector<TauFormula> now;
  for (const PsiClause& c : a.psi.clauses) {
    if (held_back(c)) a.lazy.push_back(&c);
    else now.push_back(c.formula);
  }
  a.eager = translate(TauFormula::conj(std::move(now)));
  return a;
}

std::string trace_goal(const GoalReport& r, const Artifacts& a, const Prediagram* d) {
  std::ostringstream os;
  os << "goal " << print(r.goal) << "\n";
  os << "  samples (" << a.delta.size() << "):\n";
  for (SampleId s : a.delta.members()) {
    os << "    " << a.arena->print(s);
    if (d) os << " = " << (*d)[s].to_string();
    os << "\n";
  }
  for (PsiSet set : {PsiSet::Struct, PsiSet::Log, PsiSet::Bounds, PsiSet::Right, PsiSet::Left,
                     PsiSet::Fail}) {
    os << "  psi." << set_name(set) << ":\n";
    for (const PsiClause& c : a.psi.clauses)
      if (c.set == set)
        os << "    (" << condition_name(c.condition) << ") " << print(c.formula, *a.arena) << "\n";
  }
  os << "  solver: " << (d ? "sat" : "unsat") << ", " << r.stats.bool_vars << " vars, "
     << r.stats.theory_atoms << " atoms, " << r.stats.decisions << " decisions, "
     << r.stats.conflicts << " conflicts\n";
  return os.str();
}

struct GoalRun {
  GoalReport report;
  std::optional<Counterexample> cex;
  std::exception_ptr error;
};

void run_goal(GoalRun& run, const DecideOptions& opts, const std::vector<std::string>& vars,
              const std::function<bool()>& should_stop) {
  GoalReport& r = run.report;
  const Query& goal = r.goal;
  Artifacts a = build(goal, opts);
  r.samples = a.delta.size();
  r.psi_clauses = a.psi.clauses.size();
  r.sigma_atoms = a.eager.atom_count();

  if (!opts.external_solver.empty()) {
    SigmaFormula phi = translate(a.psi.conjunction());
    r.external_sat = run_external_solver(opts.external_solver, emit_smtlib(phi, smt_names(*a.arena)));
  }

  SolveOptions so;
  so.conflict_budget = opts.conflict_budget;
  so.should_stop = should_stop;
  std::vector<bool> handed(a.lazy.size(), false);
  so.refine = [&](const Model& m) {
    Prediagram d = decode(m);
    std::vector<SigmaFormula> broken;
    for (std::size_t i = 0; i < a.lazy.size(); ++i) {
      if (handed[i] || eval_tau(a.lazy[i]->formula, d)) continue;
      handed[i] = true;
      broken.push_back(translate(a.lazy[i]->formula));
      r.sigma_atoms += broken.back().atom_count();
    }
    return broken;
  };
  SolveResult res = solve_builtin(a.eager, a.arena->size(), so);
  r.stats = res.stats;
  if (!res.sat) {
    r.outcome = GoalReport::Outcome::Valid;
    if (opts.trace) r.trace = trace_goal(r, a, nullptr);
    return;
  }

  Prediagram d = decode(res.model);
  if (opts.trace) r.trace = trace_goal(r, a, &d);
  std::vector<Violation> bad = check_diagram(d, a.delta);
  if (!bad.empty())
    throw InternalError(std::string("solver model violates condition ") + condition_name(bad[0].condition));
  if (!fail_holds(d, a.delta, a.goal_samples)) throw InternalError("solver model misses the fail clause");

  Counterexample c;
  c.valuation = valuation_from_diagram(d, a.delta, vars);
  c.p = d[*a.delta.find_kappa()];
  c.goals = goal.goals;
  c.verified = verify(c.valuation, c.p, c.goals);
  if (!c.verified) throw InternalError("extracted counterexample does not refute " + print(goal));
  r.outcome = GoalReport::Outcome::Invalid;
  run.cex = std::move(c);
}

}  // namespace

Verdict decide(const Query& q, const DecideOptions& opts) {
  std::vector<std::string> vars = free_vars(q);
  std::vector<GoalRun> runs;
  for (auto& [dir, g] : goal_list(q, opts.normalize)) {
    GoalRun run;
    run.report.direction = dir;
    run.report.goal = std::move(g);
    runs.push_back(std::move(run));
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> best_invalid{kNone};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      if (best_invalid.load() < i) continue;  // stays Cancelled
      auto stop = [&best_invalid, i] { return best_invalid.load() < i; };
      try {
        run_goal(runs[i], opts, vars, stop);
        if (runs[i].report.outcome == GoalReport::Outcome::Invalid) {
          std::size_t cur = best_invalid.load();
          while (i < cur && !best_invalid.compare_exchange_weak(cur, i)) {
          }
        }
      } catch (const SolveCancelled&) {
        runs[i].report.outcome = GoalReport::Outcome::Cancelled;
      } catch (const std::exception& e) {
        runs[i].report.outcome = GoalReport::Outcome::Failed;
        runs[i].report.error = e.what();
        runs[i].error = std::current_exception();
      }
    }
  };

  unsigned n = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, runs.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Bugs surface no matter what else happened.
  for (GoalRun& r : runs) {
    if (!r.error) continue;
    try {
      std::rethrow_exception(r.error);
    } catch (const InternalError&) {
      throw;
    } catch (...) {
    }
  }

  Verdict v;
  std::size_t k = best_invalid.load();
  if (k == kNone) {
    for (GoalRun& r : runs)
      if (r.error) std::rethrow_exception(r.error);
  } else {
    Counterexample c = *runs[k].cex;
    if (!refutes(q, c.valuation, c.p))
      throw InternalError("counterexample of goal " + print(runs[k].report.goal) +
                          " does not refute the query");
    v.valid = false;
    v.counterexample = std::move(c);
    v.goal_index = k;
    v.direction = runs[k].report.direction;
  }
  for (GoalRun& r : runs) v.goals.push_back(std::move(r.report));
  return v;
}

std::optional<Counterexample> brute_refute(const Query& q, const std::vector<Warp>& pool,
                                           std::uint64_t p_max) {
  std::vector<std::string> vars = free_vars(q);
  if (pool.empty() && !vars.empty()) return std::nullopt;
  std::vector<ExtNat> points;
  for (std::uint64_t p = 1; p <= p_max; ++p) points.emplace_back(p);
  points.push_back(kOmega);

  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Valuation theta;
    for (std::size_t i = 0; i < vars.size(); ++i) theta[vars[i]] = pool[idx[i]];
    for (ExtNat p : points) {
      if (refutes(q, theta, p)) {
        Counterexample c;
        c.valuation = std::move(theta);
        c.p = p;
        if (q.kind == Query::Kind::UnitGoal) c.goals = q.goals;
        c.verified = true;
        return c;
      }
    }
    // odometer with the last variable fastest
    std::size_t i = vars.size();
    while (i > 0 && ++idx[i - 1] == pool.size()) idx[--i] = 0;
    if (i == 0) return std::nullopt;
  }
}

std::vector<Warp> default_pool() {
  using B = Breakpoint;
  std::vector<Warp> pool{Warp::bottom(), Warp::identity(), Warp::top(), Warp::unit_step()};
  std::vector<B> step_omega{B{2, kOmega, false}};
  std::vector<B> cap2{B{2, ExtNat(2), true}};
  std::vector<B> shift_up{B{1, ExtNat(2), true}};
  std::vector<B> shift_down{B{1, ExtNat(0), false}};
  pool.push_back(Warp::from_breakpoints(step_omega, Tail::constant(kOmega)));
  pool.push_back(Warp::from_breakpoints(cap2, Tail::constant(ExtNat(2))));
  pool.push_back(Warp::from_breakpoints(shift_up, Tail::unit_ramp()));
  pool.push_back(Warp::from_breakpoints(shift_down, Tail::unit_ramp()));
  return pool;
}

std::optional<bool> run_external_solver(const std::string& solver, const std::string& script) {
  static std::atomic<unsigned> counter{0};
  namespace fs = std::filesystem;
  fs::path file = fs::temp_directory_path() /
                  ("timewarp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".smt2");
  {
    std::ofstream out(file);
    out << script;
    if (!out) return std::nullopt;
  }
  std::string cmd = "'" + solver + "' '" + file.string() + "' 2>&1";
  std::string output;
  if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    ::pclose(pipe);
  }
  std::error_code ec;
  fs::remove(file, ec);
  std::istringstream lines(output);
  std::string first;
  std::getline(lines, first);
  if (first == "sat") return true;
  if (first == "unsat") return false;
  return std::nullopt;
}

std::vector<std::string> goal_scripts(const Query& q, const DecideOptions& opts) {
  std::vector<std::string> out;
  for (auto& [dir, g] : goal_list(q, opts.normalize)) {
    Artifacts a = build(g, opts);
    out.push_back(emit_smtlib(translate(a.psi.conjunction()), smt_names(*a.arena)));
  }
  return out;
}

namespace {

const char* outcome_name(GoalReport::Outcome o) {
  switch (o) {
    case GoalReport::Outcome::Valid: return "valid";
    case GoalReport::Outcome::Invalid: return "invalid";
    case GoalReport::Outcome::Cancelled: return "cancelled";
    case GoalReport::Outcome::Failed: return "failed";
  }
  return "?";
}

}  // namespace

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["verdict"] = v.valid ? "valid" : "invalid";
  if (v.counterexample) {
    j["counterexample"] = to_json(*v.counterexample);
    j["goal"] = print(v.goals[v.goal_index].goal);
    j["direction"] = v.direction;
  }
  nlohmann::json goals = nlohmann::json::array();
  for (const GoalReport& g : v.goals) {
    nlohmann::json e{{"goal", print(g.goal)},
                     {"direction", g.direction},
                     {"outcome", outcome_name(g.outcome)},
                     {"samples", g.samples},
                     {"psi_clauses", g.psi_clauses},
                     {"sigma_atoms", g.sigma_atoms},
                     {"decisions", g.stats.decisions},
                     {"conflicts", g.stats.conflicts}};
    if (!g.error.empty()) e["error"] = g.error;
    if (g.external_sat) e["external"] = *g.external_sat ? "sat" : "unsat";
    goals.push_back(std::move(e));
  }
  j["goals"] = std::move(goals);
  return j;
}

std::string to_string(const Verdict& v) {
  if (v.valid) return "Valid";
  return "Invalid at " + to_string(*v.counterexample);
}

}  // namespace timewarp
