#include "timewarp/ext_nat.hpp"

#include <ostream>
#include <stdexcept>

namespace timewarp {

ExtNat::rep ExtNat::value() const {
  if (is_omega()) throw std::logic_error("ExtNat::value() called on omega");
  return value_;
}

ExtNat ExtNat::pred() const noexcept {
  if (is_omega() || value_ == 0) return *this;
  ExtNat e;
  e.value_ = value_ - 1;
  return e;
}

ExtNat operator+(ExtNat a, ExtNat::rep k) {
  if (a.is_omega()) return a;
  if (k > ExtNat::kMaxFinite - a.value_) ExtNat::throw_overflow();
  return ExtNat(a.value_ + k);
}

void ExtNat::throw_overflow() {
  throw std::overflow_error("ExtNat: finite value exceeds 2^62");
}

std::string ExtNat::to_string() const {
  return is_omega() ? std::string("ω") : std::to_string(value_);
}

std::ostream& operator<<(std::ostream& os, ExtNat e) { return os << e.to_string(); }

}  // namespace timewarp
