#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace seqmeas {

/// A non-negative-side real that may be +infinity. Callers must branch on
/// is_infinite() before reading value(); the infinity never leaks into
/// arithmetic as a floating special value.
class MaybeInfinite {
 public:
  /// Finite zero.
  MaybeInfinite() = default;

  static MaybeInfinite finite(double v) { return MaybeInfinite{v, false}; }
  static MaybeInfinite infinity() { return MaybeInfinite{0.0, true}; }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }

  /// Only meaningful when finite.
  double value() const noexcept { return value_; }

  /// +inf as an IEEE double, for display and comparisons at the edges.
  double as_double() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend bool operator==(const MaybeInfinite&, const MaybeInfinite&) = default;

 private:
  MaybeInfinite(double v, bool inf) : value_(v), infinite_(inf) {}

  double value_ = 0.0;
  bool infinite_ = false;
};

inline std::ostream& operator<<(std::ostream& os, const MaybeInfinite& v) {
  if (v.is_infinite()) return os << "inf";
  return os << v.value();
}

}  // namespace seqmeas
