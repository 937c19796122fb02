#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "timewarp/extract.hpp"
#include "timewarp/normalize.hpp"
#include "timewarp/saturate.hpp"
#include "timewarp/solve.hpp"
#include "timewarp/term.hpp"

namespace timewarp {

struct DecideOptions {
  NormalizeOptions normalize;
  SaturateOptions saturate;
  std::size_t conflict_budget = 2'000'000;
  /// Worker threads for the per-goal runs; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Collect a human-readable trace of every goal.
  bool trace = false;
  /// When set, every goal's formula is also handed to this SMT solver and
  /// the answers are recorded side by side.
  std::string external_solver;
};

struct GoalReport {
  enum class Outcome { Valid, Invalid, Cancelled, Failed };

  /// 0 for s ≤ t (or a plain inequation), 1 for t ≤ s of an equation.
  int direction = 0;
  Query goal;
  Outcome outcome = Outcome::Cancelled;
  std::string error;  // set when Failed
  std::size_t samples = 0;
  std::size_t psi_clauses = 0;
  /// atoms handed to the built-in solver, including lazily added ones
  std::size_t sigma_atoms = 0;
  SolveStats stats;
  std::optional<bool> external_sat;
  std::string trace;
};

struct Verdict {
  bool valid = true;
  /// For Invalid: the reported counterexample, its goal and direction.
  std::optional<Counterexample> counterexample;
  std::size_t goal_index = 0;
  int direction = 0;
  std::vector<GoalReport> goals;
};

/// Decides W ⊨ q. Equations are split into two inequations, each residuated
/// to id ≤ t and normalized into unit goals; the goals are run concurrently
/// and the lowest-indexed Invalid one is reported. An Invalid verdict always
/// carries a counterexample that was re-checked with warp arithmetic on both
/// the goal and the original query; a failed re-check throws InternalError.
/// Throws BudgetExceeded if no goal is Invalid and some goal ran out of
/// budget.
Verdict decide(const Query& q, const DecideOptions& opts = {});

/// Whether (θ, p) refutes q: ⟦t/s⟧θ(p) < p for an inequation s ≤ t, either
/// direction for an equation, every goal below p for a unit goal.
bool refutes(const Query& q, const Valuation& theta, ExtNat p);

/// Exhaustive search over valuations drawn from `pool` (lexicographic, first
/// variable slowest) and p = 1 … p_max, then ω.
std::optional<Counterexample> brute_refute(const Query& q, const std::vector<Warp>& pool,
                                           std::uint64_t p_max);

/// A small pool of warps that refutes many invalid queries: ⊥, id, ⊤, the
/// unit step, and a few steps and ramps.
std::vector<Warp> default_pool();

/// Runs an SMT-LIB script through an external solver binary. Returns the
/// answer to its (first) check-sat, or nullopt for unknown or failure.
std::optional<bool> run_external_solver(const std::string& solver, const std::string& script);

/// The SMT-LIB script of each unit goal of q, in decide's goal order.
std::vector<std::string> goal_scripts(const Query& q, const DecideOptions& opts = {});

/// Unit goals of q in decide's order, paired with their direction.
std::vector<std::pair<int, Query>> goal_list(const Query& q, const NormalizeOptions& opts = {});

nlohmann::json to_json(const Verdict& v);
std::string to_string(const Verdict& v);

}  // namespace timewarp
