#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "timewarp/ext_nat.hpp"

namespace timewarp {

/// A maximal run of consecutive naturals [start, next piece's start) on which
/// a warp is either constant (`ramp == false`) or increases by exactly one per
/// step (`ramp == true`). `value` is the warp's value at `start`.
struct Piece {
  std::uint64_t start = 0;
  ExtNat value;
  bool ramp = false;

  bool operator==(const Piece&) const = default;
};

/// An anchor point of the breakpoint (rendering) form: f(at) = value. A ramp
/// anchor is reached from the previous anchor by unit steps capped at `value`
/// (any remaining gap is a jump at `at`); a step anchor holds the previous
/// value until `at`. The origin (0, 0) is implicit.
struct Breakpoint {
  std::uint64_t at = 0;
  ExtNat value;
  bool ramp = false;

  bool operator==(const Breakpoint&) const = default;
};

/// Behaviour past the last breakpoint N: either constant `value` for every
/// n > N (and at ω), or a unit-slope ramp f(n) = f(N) + (n - N) with f(ω) = ω.
struct Tail {
  bool ramp = false;
  ExtNat value;

  static Tail constant(ExtNat v) { return Tail{false, v}; }
  static Tail unit_ramp() { return Tail{true, ExtNat{}}; }

  bool operator==(const Tail&) const = default;
};

/// A time warp: a monotone map f on ω∪{ω} with f(0) = 0 and
/// f(ω) = sup{f(n) | n ∈ ω}, restricted to the class of functions that are
/// piecewise constant or unit-slope with finitely many pieces.
///
/// Values are immutable and held in a canonical form (greedy maximal pieces
/// from the left), so `==` is extensional equality.
class Warp {
 public:
  /// The identity warp.
  Warp();

  static Warp identity();
  static Warp bottom();
  static Warp top();
  /// n ↦ min(n, 1), with ω ↦ 1.
  static Warp unit_step();

  /// Builds a warp from anchors. Anchors must have strictly increasing
  /// positions ≥ 1 and nondecreasing values; a constant tail must not lie
  /// below the last anchor value. Throws std::invalid_argument otherwise.
  static Warp from_breakpoints(std::span<const Breakpoint> anchors, Tail tail);

  /// Builds a warp from pieces in the internal form. The pieces need not be
  /// maximal; they must start at 0 with value 0 and be monotone.
  static Warp from_pieces(std::vector<Piece> pieces);

  ExtNat operator()(ExtNat p) const;
  ExtNat operator()(std::uint64_t n) const { return (*this)(ExtNat(n)); }
  ExtNat at_omega() const;

  std::span<const Piece> pieces() const noexcept { return pieces_; }

  /// Canonical anchor rendering of this warp (inverse of from_breakpoints).
  std::vector<Breakpoint> breakpoints() const;
  Tail tail() const;

  /// Largest position at which the warp's pieces change; every point past it
  /// lies in the final piece.
  std::uint64_t last_break() const noexcept { return pieces_.back().start; }
  /// Largest finite value taken at any piece start (0 if none).
  std::uint64_t max_finite_value() const noexcept;

  bool operator==(const Warp&) const = default;

 private:
  explicit Warp(std::vector<Piece> canonical) : pieces_(std::move(canonical)) {}
  friend class WarpBuilder;

  std::vector<Piece> pieces_;
};

// The algebra operations. All results are canonical.
Warp compose(const Warp& f, const Warp& g);  // f ∘ g
Warp meet(const Warp& f, const Warp& g);
Warp join(const Warp& f, const Warp& g);
Warp lres(const Warp& f, const Warp& g);  // f \ g
Warp rres(const Warp& g, const Warp& f);  // g / f
Warp op_o(const Warp& f);                 // ⊤ \ f
Warp op_l(const Warp& f);                 // id / f
Warp op_r(const Warp& f);                 // f \ id

/// Least p with f(p) = f(ω).
ExtNat last(const Warp& f);

/// Pointwise order, decided exactly.
bool leq(const Warp& f, const Warp& g);

/// `{0↦0, 2↦5, 7↦10+; tail=const 10}`; `+` marks ramp anchors.
std::string to_string(const Warp& f);
std::ostream& operator<<(std::ostream& os, const Warp& f);

nlohmann::json to_json(const Warp& f);
Warp warp_from_json(const nlohmann::json& j);

}  // namespace timewarp
