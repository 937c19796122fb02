#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace timewarp {

/// An element of ω∪{ω}: a natural number or the top element ω.
///
/// Finite values are capped at kMaxFinite; arithmetic that would exceed it
/// throws std::overflow_error rather than silently becoming ω.
class ExtNat {
 public:
  using rep = std::uint64_t;

  static constexpr rep kMaxFinite = rep{1} << 62;

  constexpr ExtNat() noexcept = default;
  constexpr explicit ExtNat(rep n) : value_(n) {
    if (n > kMaxFinite) throw_overflow();
  }

  static constexpr ExtNat omega() noexcept {
    ExtNat e;
    e.value_ = kOmegaRep;
    return e;
  }

  constexpr bool is_omega() const noexcept { return value_ == kOmegaRep; }
  constexpr bool is_finite() const noexcept { return value_ != kOmegaRep; }
  constexpr bool is_zero() const noexcept { return value_ == 0; }

  /// The finite value. Must not be called on ω.
  rep value() const;

  constexpr auto operator<=>(const ExtNat&) const noexcept = default;

  /// p ⊕ 1: successor, with ω ⊕ 1 = ω.
  ExtNat succ() const { return *this + 1; }
  /// p ⊖ 1: predecessor, with 0 ⊖ 1 = 0 and ω ⊖ 1 = ω.
  ExtNat pred() const noexcept;

  /// Saturating at ω: ω + k = ω.
  friend ExtNat operator+(ExtNat a, rep k);

  std::string to_string() const;

 private:
  static constexpr rep kOmegaRep = ~rep{0};
  [[noreturn]] static void throw_overflow();

  rep value_ = 0;
};

inline constexpr ExtNat kOmega = ExtNat::omega();

std::ostream& operator<<(std::ostream& os, ExtNat e);

}  // namespace timewarp
