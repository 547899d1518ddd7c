// Test-only numerical oracles: independent quadrature routes used to compute
// expected values. Nothing here touches the grid code paths under test.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "orlicz/grid_field.hpp"
#include "orlicz/rng.hpp"

namespace oracles {

/// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration.
struct GaussRule {
  std::vector<double> x, w;
  explicit GaussRule(int n) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
      double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p0 = 0, p1 = 0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1.0;
        p1 = 0.0;
        for (int k = 0; k < n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k + 1.0) * xi * p1 - k * p2) / (k + 1.0);
        }
        const double dp = n * (xi * p0 - p1) / (xi * xi - 1.0);
        const double step = p0 / dp;
        xi -= step;
        if (std::abs(step) < 1e-15) break;
      }
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * xi * p1 - k * p2) / (k + 1.0);
      }
      const double dp = n * (xi * p0 - p1) / (xi * xi - 1.0);
      x[i] = xi;
      w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
  }
};

inline double integrate_interval(const std::function<double(double)>& f, double a, double b, int panels = 256) {
  static const GaussRule rule(16);
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels;
    const double hi = a + (b - a) * (p + 1) / panels;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < rule.x.size(); ++i) total += rule.w[i] * half * f(mid + half * rule.x[i]);
  }
  return total;
}

/// Polar quadrature over the disk of radius R centered at the origin.
inline double integrate_disk(const std::function<double(double, double)>& f, double R, int nr = 160,
                             int ntheta = 256) {
  static const GaussRule rule(16);
  double total = 0.0;
  for (int p = 0; p < nr; ++p) {
    const double rlo = R * p / nr, rhi = R * (p + 1) / nr;
    const double rmid = 0.5 * (rlo + rhi), rhalf = 0.5 * (rhi - rlo);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double r = rmid + rhalf * rule.x[i];
      double ring = 0.0;
      for (int k = 0; k < ntheta; ++k) {
        const double th = 2.0 * M_PI * (k + 0.5) / ntheta;
        ring += f(r * std::cos(th), r * std::sin(th));
      }
      total += rule.w[i] * rhalf * r * ring * (2.0 * M_PI / ntheta);
    }
  }
  return total;
}

/// Discrete L^p norm (sum |f|^p h^n)^{1/p} over the active nodes.
inline double discrete_lp(const orlicz::GridField& f, double p) {
  const auto& dom = f.domain();
  double s = 0.0;
  for (std::size_t i = 0; i < dom.n_active(); ++i)
    s += std::pow(std::abs(f.at(static_cast<std::int32_t>(i))), p);
  return std::pow(s * dom.cell_measure(), 1.0 / p);
}

/// Monte Carlo mean of |x . e_1| over the unit ball (rejection sampling).
inline std::pair<double, double> mc_mean_abs_x1(int dim, std::int64_t n, orlicz::Rng& rng) {
  double sum = 0.0, sum2 = 0.0;
  std::int64_t accepted = 0;
  while (accepted < n) {
    double r2 = 0.0, x0 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double x = rng.uniform(-1.0, 1.0);
      if (d == 0) x0 = x;
      r2 += x * x;
    }
    if (r2 >= 1.0) continue;
    sum += std::abs(x0);
    sum2 += x0 * x0;
    ++accepted;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum2 / static_cast<double>(n) - mean * mean;
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace oracles
