#pragma once

#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"

namespace orlicz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Extended nonnegative value: a real in [0, inf]. Integrand values of
/// Phi-functions live here; +inf is an ordinary value, not an error.
///
/// Arithmetic conventions used throughout the modular integrals:
///   a + inf = inf,   0 * inf = 0.
class ExtNonneg {
public:
  ExtNonneg() : v_(0.0) {}
  ExtNonneg(double v) : v_(v) {  // NOLINT: implicit by design
    if (std::isnan(v) || v < 0.0)
      throw input_error("ExtNonneg requires a value in [0, inf]");
  }

  static ExtNonneg infinity() { return ExtNonneg(std::numeric_limits<double>::infinity()); }

  double value() const { return v_; }
  bool is_finite() const { return std::isfinite(v_); }
  bool is_infinite() const { return std::isinf(v_); }

  friend ExtNonneg operator+(ExtNonneg a, ExtNonneg b) { return ExtNonneg(a.v_ + b.v_); }
  friend bool operator<(ExtNonneg a, ExtNonneg b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtNonneg a, ExtNonneg b) { return a.v_ <= b.v_; }
  friend bool operator==(ExtNonneg a, ExtNonneg b) { return a.v_ == b.v_; }

private:
  double v_;
};

/// Product with the 0 * inf = 0 convention (IEEE would give NaN).
inline double ext_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

/// Scalar multiple of an extended value, same convention.
inline ExtNonneg operator*(double a, ExtNonneg b) { return ExtNonneg(ext_mul(a, b.value())); }

}  // namespace orlicz
