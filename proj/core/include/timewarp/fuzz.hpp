#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "timewarp/pipeline.hpp"

namespace timewarp {

struct FuzzOptions {
  std::size_t queries = 500;
  std::uint64_t seed = 1;
  /// Height of each side, leaves counting as 1.
  int max_depth = 3;
  int max_vars = 2;
  /// Largest finite point tried by the brute-force oracle.
  std::uint64_t p_max = 4;
  /// Budgets for decide. `external_solver` enables the solver cross-check.
  DecideOptions decide;
};

struct FuzzFailure {
  std::size_t index;
  std::string query;
  std::string check;  // "a" … "d", or "error"
  std::string detail;
};

struct FuzzReport {
  std::uint64_t seed = 0;
  std::size_t queries = 0;
  std::size_t valid = 0;
  std::size_t invalid = 0;
  std::size_t budget_exceeded = 0;
  std::size_t oracle_refuted = 0;
  std::size_t oracle_agreements = 0;
  std::size_t goals = 0;
  bool external_available = false;
  std::size_t external_checked = 0;
  std::size_t external_agreements = 0;
  std::size_t normalization_checks = 0;
  /// Per check: (a) oracle counterexample ⇒ Invalid, (b) Invalid ⇒ verified,
  /// (c) built-in solver = external solver, (d) normal form = original term.
  std::size_t mismatches_a = 0, mismatches_b = 0, mismatches_c = 0, mismatches_d = 0;
  std::vector<FuzzFailure> failures;
  /// Queries that ran out of budget, with the budget that ran out.
  std::vector<FuzzFailure> over_budget;

  std::size_t mismatches() const { return mismatches_a + mismatches_b + mismatches_c + mismatches_d; }
};

/// A random term of height at most `depth` over the first `vars` of x, y, z, …
Term random_term(std::mt19937_64& rng, int depth, int vars);
/// A random inequation or equation.
Query random_query(std::mt19937_64& rng, int depth, int vars);

/// Deterministic for a fixed seed and options: the report depends on nothing
/// else (no timings, single-threaded goal runs).
FuzzReport fuzz(const FuzzOptions& opts);

nlohmann::json to_json(const FuzzReport& r);

}  // namespace timewarp
