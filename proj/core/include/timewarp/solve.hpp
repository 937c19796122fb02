#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "timewarp/constraints.hpp"
#include "timewarp/formula.hpp"

namespace timewarp {

/// Variable standing for the constant 0 of (ℕ, ≤, S, 0).
inline constexpr std::uint32_t kZeroVar = kNoId - 1;

/// Atoms over ℕ: x ≤ y, S(x, y) (y = x + 1), x = 0, x = y.
struct SigmaAtom {
  enum class Kind : std::uint8_t { Leq, Succ, IsZero, Eq };
  Kind kind;
  std::uint32_t x = kNoId;
  std::uint32_t y = kNoId;
};

using SigmaFormula = Formula<SigmaAtom>;

/// w: variables → ℕ, indexed by sample id.
using Model = std::vector<std::uint64_t>;

/// Atom-wise re-encoding of a formula over ω∪{ω} as one over ℕ, where the
/// value n stands for n − 1 and 0 stands for ω:
///   O(x) ↦ x = 0,  I(x) ↦ S(0, x),
///   S(x, y) ↦ (x = 0 ∧ y = 0) ∨ (¬x = 0 ∧ S(x, y)),
///   x ≼ y ↦ y = 0 ∨ (¬x = 0 ∧ x ≤ y),  x ≗ y ↦ x = y.
SigmaFormula translate(const TauFormula& psi);

/// δ(α) = ι(w(α)) with ι(0) = ω and ι(n) = n − 1.
Prediagram decode(const Model& w);
/// Inverse of decode.
Model encode(const Prediagram& d);

bool eval_sigma(const SigmaFormula& f, const Model& w);

/// Thrown when the caller's stop predicate fires.
class SolveCancelled : public std::runtime_error {
 public:
  SolveCancelled() : std::runtime_error("solver cancelled") {}
};

struct SolveOptions {
  std::size_t conflict_budget = 2'000'000;
  /// Polled periodically; returning true aborts with SolveCancelled.
  std::function<bool()> should_stop;
  /// Called with each candidate model. Conjuncts it returns are added to φ
  /// and the search resumes, keeping what it learned; returning none accepts
  /// the model. Lets callers hold back constraints that mostly hold anyway.
  std::function<std::vector<SigmaFormula>(const Model&)> refine;
};

struct SolveStats {
  std::size_t bool_vars = 0;
  std::size_t theory_atoms = 0;
  std::size_t clauses = 0;
  std::size_t decisions = 0;
  std::size_t conflicts = 0;
  std::size_t theory_conflicts = 0;
  /// Rounds in which refine added conjuncts.
  std::size_t refinements = 0;
};

struct SolveResult {
  bool sat = false;
  Model model;  // least satisfying assignment when sat
  SolveStats stats;
};

/// Decides satisfiability of φ over ℕ for variables 0 … num_vars−1 (plus the
/// zero constant). Conflict-driven clause learning over difference
/// constraints with incremental negative-cycle detection. Deterministic.
/// Throws BudgetExceeded past the conflict budget.
SolveResult solve_builtin(const SigmaFormula& phi, std::size_t num_vars,
                          const SolveOptions& opts = {});

/// Variable names for SMT-LIB output, derived from sample prints
/// (κ written as k), made unique.
std::vector<std::string> smt_names(const SampleArena& arena);

/// A complete QF_LIA script: one Int per variable, nonnegativity, φ,
/// check-sat and get-model.
std::string emit_smtlib(const SigmaFormula& phi, const std::vector<std::string>& names);

}  // namespace timewarp
