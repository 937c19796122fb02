#pragma once

// Random generators and brute-force reference computations shared by the
// unit tests and the acceptance binary. Nothing here calls the warp
// operations it is used to check.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "timewarp/constraints.hpp"
#include "timewarp/term.hpp"
#include "timewarp/warp.hpp"

namespace tw_test {

using timewarp::BasicTerm;
using timewarp::Breakpoint;
using timewarp::ExtNat;
using timewarp::kOmega;
using timewarp::Tail;
using timewarp::Warp;

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

/// A random warp with at most four anchors at positions ≤ max_pos and
/// finite values ≤ max_val; ω appears as a value now and then.
inline Warp random_warp(std::mt19937_64& rng, std::uint64_t max_pos = 10, std::uint64_t max_val = 12) {
  std::vector<Breakpoint> anchors;
  std::uint64_t pos = 0;
  ExtNat val(0);
  std::uint64_t n = below(rng, 5);
  for (std::uint64_t i = 0; i < n && pos < max_pos && val.is_finite(); ++i) {
    pos += 1 + below(rng, std::max<std::uint64_t>(1, max_pos - pos));
    if (below(rng, 10) == 0) {
      val = kOmega;
    } else {
      std::uint64_t lo = val.value();
      val = ExtNat(lo + below(rng, max_val - std::min(lo, max_val) + 1));
    }
    anchors.push_back(Breakpoint{pos, val, below(rng, 2) == 0});
  }
  Tail tail = Tail::constant(val);
  if (val.is_finite()) {
    switch (below(rng, 3)) {
      case 0: tail = Tail::unit_ramp(); break;
      case 1: tail = Tail::constant(below(rng, 6) == 0 ? kOmega : ExtNat(val.value() + below(rng, 4))); break;
      default: break;
    }
  }
  return Warp::from_breakpoints(anchors, tail);
}

/// Horizon past which every warp in `fs` sits in its final piece, with room
/// to spare for comparisons between ramps and constants.
inline std::uint64_t horizon(std::initializer_list<const Warp*> fs) {
  std::uint64_t h = 0;
  for (const Warp* f : fs) h = std::max(h, f->last_break() + f->max_finite_value());
  return 2 * h + 8;
}

/// f ≤ g, checked at 0 … h and at ω.
inline bool pointwise_leq(const Warp& f, const Warp& g, std::uint64_t h) {
  for (std::uint64_t n = 0; n <= h; ++n)
    if (f(n) > g(n)) return false;
  return f(kOmega) <= g(kOmega);
}

inline std::vector<ExtNat> grid(std::uint64_t h) {
  std::vector<ExtNat> g;
  for (std::uint64_t n = 0; n <= h; ++n) g.emplace_back(n);
  g.push_back(kOmega);
  return g;
}

/// Left residual straight from its defining formula: 0 at 0,
/// ⋁{q | f(q) ≤ g(p)} at finite p, ⋁{q | ∃m. f(q) ≤ g(m)} at ω.
/// Suprema over ω∪{ω} are taken by scanning q up to `h`; a set that still
/// contains h is unbounded.
inline ExtNat brute_lres(const Warp& f, const Warp& g, ExtNat p, std::uint64_t h) {
  if (p.is_zero()) return ExtNat(0);
  // Largest q with f(q) ≤ b, scanning far enough that a ramp from h on
  // cannot still be under b.
  auto largest_below = [&](ExtNat b) {
    if (b.is_omega() || f(kOmega) <= b) return kOmega;
    std::uint64_t best = 0, top = h + b.value();
    for (std::uint64_t q = 0; q <= top; ++q)
      if (f(ExtNat(q)) <= b) best = q;
    return ExtNat(best);
  };
  if (p.is_finite()) return largest_below(g(p));
  // p = ω: the union over all finite m of {q | f(q) ≤ g(m)}.
  if (g(ExtNat(h)).is_omega()) return kOmega;
  if (g(kOmega).is_omega()) {
    if (!f(ExtNat(h)).is_omega()) return kOmega;
    std::uint64_t best = 0;
    for (std::uint64_t q = 0; q <= h; ++q)
      if (f(ExtNat(q)).is_finite()) best = q;
    return ExtNat(best);
  }
  return largest_below(g(kOmega));
}

/// Right residual from ⋀ g[{q | p ≤ f(q)}] (⋀∅ = ω).
inline ExtNat brute_rres(const Warp& g, const Warp& f, ExtNat p, std::uint64_t h) {
  ExtNat best = kOmega;
  std::uint64_t top = h + (p.is_finite() ? p.value() : 0);
  for (std::uint64_t q = 0; q <= top; ++q)
    if (p <= f(ExtNat(q))) best = std::min(best, g(ExtNat(q)));
  if (p <= f(kOmega)) best = std::min(best, g(kOmega));
  return best;
}

/// True if f takes the value ω at some finite point (checked up to h).
inline bool reaches_omega_finitely(const Warp& f, std::uint64_t h) { return f(ExtNat(h)).is_omega(); }

/// Random basic term over `vars` with complexity at most `budget`
/// (composition chains counting once).
inline BasicTerm random_basic(std::mt19937_64& rng, std::size_t budget, const std::vector<std::string>& vars) {
  auto leaf = [&] {
    std::uint64_t k = below(rng, vars.size() + 2);
    if (k < vars.size()) return BasicTerm::var(vars[k]);
    return k == vars.size() ? BasicTerm::id() : BasicTerm::bot();
  };
  if (budget <= 1) return leaf();
  switch (below(rng, 5)) {
    case 0: return leaf();
    case 1: return BasicTerm::o(random_basic(rng, budget - 1, vars));
    case 2: return BasicTerm::l(random_basic(rng, budget - 1, vars));
    case 3: return BasicTerm::r(random_basic(rng, budget - 1, vars));
    default: {
      // a chain node plus two factors
      if (budget < 3) return leaf();
      std::size_t left = 1 + below(rng, budget - 2);
      BasicTerm a = random_basic(rng, left, vars);
      BasicTerm b = random_basic(rng, budget - 1 - left, vars);
      BasicTerm t = BasicTerm::comp(a, b);
      return t.complexity() <= budget ? t : a;
    }
  }
}

/// Uniform values from {0, …, max_val, ω} for every arena sample.
inline timewarp::Prediagram random_prediagram(std::mt19937_64& rng, std::size_t n, std::uint64_t max_val = 4) {
  timewarp::Prediagram d(n);
  for (ExtNat& v : d) {
    std::uint64_t k = below(rng, max_val + 2);
    v = k > max_val ? kOmega : ExtNat(k);
  }
  return d;
}

/// Nudges one or two entries of a diagram up or down by one, or to ω / 0.
inline timewarp::Prediagram perturb(std::mt19937_64& rng, timewarp::Prediagram d) {
  std::uint64_t changes = 1 + below(rng, 2);
  for (std::uint64_t i = 0; i < changes && !d.empty(); ++i) {
    ExtNat& v = d[below(rng, d.size())];
    switch (below(rng, 4)) {
      case 0: v = v.succ(); break;
      case 1: v = v.pred(); break;
      case 2: v = kOmega; break;
      default: v = ExtNat(0); break;
    }
  }
  return d;
}

}  // namespace tw_test
