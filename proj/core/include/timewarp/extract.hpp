#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "timewarp/constraints.hpp"
#include "timewarp/saturate.hpp"
#include "timewarp/term.hpp"
#include "timewarp/warp.hpp"

namespace timewarp {

/// Observed input/output pairs of one variable, sorted by input, without
/// duplicates.
struct PointSet {
  std::string var;
  std::vector<std::pair<ExtNat, ExtNat>> points;
};

/// (δ(α), δ(x[α])) for every sample x[α] ∈ Δ.
PointSet points_of(const std::string& var, const Prediagram& d, const SampleSet& delta);

/// Interpolates the points with capped unit-slope segments through (0, 0):
/// between consecutive inputs i₁ < i₂ the warp is min(j₂, j₁ + (i − i₁)),
/// reaching j₂ at i₂. Past the last finite input the same rule runs towards
/// (ω, at_omega), so the warp never stabilizes when at_omega is ω.
/// Throws std::invalid_argument if the points are not a monotone function
/// or contradict at_omega.
Warp build_warp(const PointSet& p, ExtNat at_omega);

/// θ(x) = build_warp(points_of(x), δ(x[last(x)])) for each variable with
/// observations, and id for every other name in `vars`.
Valuation valuation_from_diagram(const Prediagram& d, const SampleSet& delta,
                                 const std::vector<std::string>& vars);

/// ⟦tᵢ⟧θ(p) < p for every goal, evaluated with warp arithmetic alone.
bool verify(const Valuation& theta, ExtNat p, const std::vector<BasicTerm>& goals);

struct Counterexample {
  Valuation valuation;
  ExtNat p;
  std::vector<BasicTerm> goals;
  bool verified = false;
};

/// {"p": n | "omega", "valuation": {var: warp}, "verified": bool}
nlohmann::json to_json(const Counterexample& c);
std::string to_string(const Counterexample& c);

}  // namespace timewarp
