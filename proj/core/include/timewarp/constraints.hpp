#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "timewarp/ext_nat.hpp"
#include "timewarp/formula.hpp"
#include "timewarp/saturate.hpp"
#include "timewarp/term.hpp"

namespace timewarp {

/// Atoms over ω∪{ω}: a ≼ b, S(a, b), O(a) (a = ω), I(a) (a = 0), a ≗ b.
struct TauAtom {
  enum class Kind : std::uint8_t { Leq, Succ, IsOmega, IsZero, Eq };
  Kind kind;
  SampleId a = kNoId;
  SampleId b = kNoId;
};

using TauFormula = Formula<TauAtom>;

/// δ: Δ → ω∪{ω}, indexed by sample id (entries for non-members are ignored).
using Prediagram = std::vector<ExtNat>;

/// The diagram conditions, numbered in the order they are stated:
/// structural (1–6), logical (7–10), o (11–14), r (15–18), ℓ (19–23).
inline constexpr int kConditionCount = 23;
/// Short name such as "mon", "zero", "r-finite"; "fail" for 0.
const char* condition_name(int condition);

enum class PsiSet : std::uint8_t { Struct, Log, Bounds, Right, Left, Fail };
const char* set_name(PsiSet s);

struct PsiClause {
  PsiSet set;
  int condition;  // 0 for fail clauses
  TauFormula formula;
};

/// ψ as a list of conjuncts, each tagged with the set and condition it comes
/// from.
struct Psi {
  std::vector<PsiClause> clauses;

  TauFormula conjunction() const;
};

/// Builds ψ for a saturated Δ and goal samples t₁[κ], …, tₙ[κ]. Throws
/// std::invalid_argument if Δ is not saturated or a goal is not in Δ.
Psi build_psi(const SampleSet& delta, const std::vector<SampleId>& goals);

bool eval_atom(const TauAtom& a, const Prediagram& d);
bool eval_tau(const TauFormula& f, const Prediagram& d);

std::string print(const TauAtom& a, const SampleArena& arena);
std::string print(const TauFormula& f, const SampleArena& arena);

struct Violation {
  int condition;
  std::vector<SampleId> witnesses;
};

/// Every violated diagram condition, with the samples that witness it.
/// Checked directly on values, independently of ψ.
std::vector<Violation> check_diagram(const Prediagram& d, const SampleSet& delta);

/// δ(tᵢ[κ]) < δ(κ) for every goal sample.
bool fail_holds(const Prediagram& d, const SampleSet& delta, const std::vector<SampleId>& goals);

/// The diagram induced by a valuation: δ(κ) = p, δ(t[α]) = ⟦t⟧θ(δ(α)),
/// δ(last(t)) = last(⟦t⟧θ), and suc/pre by ⊕1/⊖1.
Prediagram diagram_from_valuation(const Valuation& theta, ExtNat p, const SampleSet& delta);

}  // namespace timewarp
