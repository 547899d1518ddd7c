#pragma once

#include <cmath>
#include <functional>

#include "orlicz/errors.hpp"
#include "orlicz/ext_value.hpp"
#include "orlicz/grid_field.hpp"
#include "orlicz/parallel.hpp"
#include "orlicz/phi_model.hpp"

namespace orlicz {

/// The modular: integral over the domain of phi(x, |f(x)|), discretized as
/// the node sum times the cell measure. Any node with an infinite integrand
/// makes the whole value +inf.
inline ExtNonneg modular(const NodePhi& phi, const GridField& f, double scale = 1.0) {
  const GridDomain& dom = phi.domain();
  const double cell = dom.cell_measure();
  const double s = detail::sum_over(dom.n_active(), [&](std::size_t i) {
    const auto id = static_cast<std::int32_t>(i);
    return phi(id, std::abs(f.at(id)) * scale);
  });
  return ExtNonneg(s * cell);
}

inline ExtNonneg modular(const PhiModel& m, const GridField& f, double scale = 1.0) {
  NodePhi phi(m, f.domain());
  return modular(phi, f, scale);
}

/// Smallest lambda with g(lambda) <= 1 for a nonincreasing modular profile
/// g(lambda); the common core of the Luxemburg norm and its smoothed-quotient
/// counterpart. Approaches the infimum from above: the returned lambda is
/// always feasible. Bracket by doubling/halving from 1, stop when the bracket
/// width drops below tol * lambda.
inline double unit_modular_scale(const std::function<double(double)>& g, double tol = 1e-6) {
  double lo, hi;
  if (g(1.0) <= 1.0) {
    hi = 1.0;
    lo = 0.5;
    while (g(lo) <= 1.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return 0.0;  // modular vanishes at every scale
    }
  } else {
    lo = 1.0;
    hi = 2.0;
    while (g(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) throw norm_error("modular stays above 1 up to the 1e12 scale cap");
    }
  }
  int it = 0;
  while (hi - lo > tol * hi) {
    if (++it > 200) throw norm_error("norm bisection failed to close the bracket in 200 iterations");
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// Luxemburg quasi-norm inf{ lambda > 0 : modular(f / lambda) <= 1 }.
inline double luxemburg_norm(const PhiModel& m, const GridField& f, double tol = 1e-6) {
  if (f.max_abs() == 0.0) return 0.0;
  NodePhi phi(m, f.domain());
  return unit_modular_scale([&](double lambda) { return modular(phi, f, 1.0 / lambda).value(); }, tol);
}

}  // namespace orlicz
