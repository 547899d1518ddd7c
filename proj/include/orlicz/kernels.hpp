#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/grid_domain.hpp"

namespace orlicz {

/// Mean of |x . e_1| over the unit ball: the gradient scaling constant of the
/// localization limit. Closed form 2 V_{n-1} / ((n+1) V_n) with V_k the unit
/// ball volume.
inline double c_n(int n) {
  if (n < 1) throw input_error("c_n needs dimension >= 1");
  auto ball_volume = [](int k) { return std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0 + 1.0); };
  return 2.0 * ball_volume(n - 1) / ((n + 1) * ball_volume(n));
}

/// Radial kernel families. Each eps-member is a probability density on
/// (0, inf) whose mass concentrates at 0 as eps -> 0:
///   uniform      (1/eps) on (0, eps]
///   exponential  (1/eps) exp(-r/eps)
///   gagliardo    eps r^{eps-1} on (0, 1)
enum class KernelFamily { uniform, exponential, gagliardo };

inline std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::uniform: return "uniform";
    case KernelFamily::exponential: return "exponential";
    case KernelFamily::gagliardo: return "gagliardo";
  }
  return "?";
}

inline KernelFamily kernel_family_from_string(const std::string& s) {
  if (s == "uniform") return KernelFamily::uniform;
  if (s == "exponential") return KernelFamily::exponential;
  if (s == "gagliardo") return KernelFamily::gagliardo;
  throw input_error("unknown kernel family '" + s + "'");
}

inline double kernel_density(KernelFamily f, double eps, double r) {
  if (r <= 0) return 0.0;
  switch (f) {
    case KernelFamily::uniform: return r <= eps ? 1.0 / eps : 0.0;
    case KernelFamily::exponential: return std::exp(-r / eps) / eps;
    case KernelFamily::gagliardo: return r < 1.0 ? eps * std::pow(r, eps - 1.0) : 0.0;
  }
  return 0.0;
}

inline double kernel_cdf(KernelFamily f, double eps, double r) {
  if (r <= 0) return 0.0;
  switch (f) {
    case KernelFamily::uniform: return std::min(1.0, r / eps);
    case KernelFamily::exponential: return 1.0 - std::exp(-r / eps);
    case KernelFamily::gagliardo: return std::min(1.0, std::pow(r, eps));
  }
  return 0.0;
}

inline double kernel_inverse_cdf(KernelFamily f, double eps, double m) {
  switch (f) {
    case KernelFamily::uniform: return m * eps;
    case KernelFamily::exponential: return -eps * std::log1p(-m);
    case KernelFamily::gagliardo: return std::pow(m, 1.0 / eps);
  }
  return 0.0;
}

/// Kernel family plus the decreasing eps sequence to sweep.
struct KernelSchedule {
  KernelFamily family = KernelFamily::uniform;
  std::vector<double> eps;
  int r_nodes = 64;

  static KernelSchedule from_json(const json& j) {
    KernelSchedule s;
    s.family = kernel_family_from_string(j.at("family").get<std::string>());
    s.eps = j.at("eps").get<std::vector<double>>();
    if (j.contains("r_nodes")) s.r_nodes = j.at("r_nodes").get<int>();
    if (s.eps.empty()) throw input_error("kernel schedule needs at least one eps");
    for (std::size_t i = 0; i < s.eps.size(); ++i) {
      if (!(s.eps[i] > 0)) throw input_error("kernel eps must be positive");
      if (i > 0 && !(s.eps[i] < s.eps[i - 1])) throw input_error("kernel eps sequence must decrease");
      if (s.family == KernelFamily::gagliardo && !(s.eps[i] < 1.0))
        throw input_error("gagliardo kernel needs eps < 1");
    }
    if (s.r_nodes < 4 || s.r_nodes > 4096) throw input_error("r_nodes out of range");
    return s;
  }

  json to_json() const { return json{{"family", to_string(family)}, {"eps", eps}, {"r_nodes", r_nodes}}; }
};

/// Smallest eps the grid can resolve for the scale-type kernels. The
/// gagliardo exponent plays a different role and is not constrained by this.
inline double eps_min_for_grid(KernelFamily f, const GridDomain& dom) {
  if (f == KernelFamily::gagliardo) return 0.0;
  return 8.0 * dom.spacing();
}

/// Discrete radial quadrature for one eps-member against a given grid.
///
/// Construction: r_nodes equal-mass bins of the kernel on (0, r_cap], where
/// r_cap is the largest radius with a nonempty interior set (mass beyond it
/// multiplies an identically zero inner integral and is dropped exactly).
/// Each node is snapped to its lattice radius class K = floor(r/h); classes
/// below the smallest admissible stencil are clamped up to it, so kernel mass
/// that the grid cannot resolve is evaluated at the smallest resolvable
/// radius. The evaluation radius of class K is the stencil's calibrated
/// r_eff. Weights are exact bin masses; duplicates are merged.
struct RadialRule {
  struct Node {
    int K;
    double r;  // calibrated evaluation radius of the class
    double weight;
  };
  double eps = 0.0;
  std::vector<Node> nodes;
  double sub_resolution_mass = 0.0;  // kernel mass below the admissible radius
  double dropped_tail_mass = 0.0;    // mass beyond r_cap (zero integrand)
};

inline RadialRule make_radial_rule(KernelFamily family, double eps, const GridDomain& dom, int r_nodes = 64) {
  if (eps < eps_min_for_grid(family, dom))
    throw input_error("eps below the grid's resolvable minimum (8h) for this kernel family");
  const double h = dom.spacing();
  const int k_min = dom.min_stencil_class();
  int k_cap = std::max(k_min, static_cast<int>(std::floor(dom.max_distance() / h)));
  while (k_cap > k_min && dom.make_stencil(k_cap).r_eff > dom.max_distance()) --k_cap;

  RadialRule rule;
  rule.eps = eps;
  const double mass_cap = kernel_cdf(family, eps, dom.max_distance());
  rule.dropped_tail_mass = 1.0 - mass_cap;
  rule.sub_resolution_mass = kernel_cdf(family, eps, k_min * h);

  std::map<int, double> weight_of;
  for (int j = 0; j < r_nodes; ++j) {
    const double m = mass_cap * (j + 0.5) / r_nodes;
    const double r_raw = kernel_inverse_cdf(family, eps, m);
    int K = static_cast<int>(std::floor(r_raw / h));
    K = std::min(std::max(K, k_min), k_cap);
    weight_of[K] += mass_cap / r_nodes;
  }
  for (const auto& [K, w] : weight_of) {
    const auto st = dom.make_stencil(K);
    rule.nodes.push_back({K, st.r_eff, w});
  }
  return rule;
}

/// Condition checks on a kernel family along a schedule: unit mass per member
/// (quadrature cross-check of the closed form) and vanishing tails.
struct KernelConditionReport {
  bool unit_mass = false;
  bool tails_vanish = false;
  double worst_mass_defect = 0.0;
  double tail_at_smallest_eps = 0.0;
};

inline KernelConditionReport check_kernel_conditions(const KernelSchedule& s, double gamma = 0.05) {
  KernelConditionReport rep;
  rep.unit_mass = true;
  for (double eps : s.eps) {
    // midpoint quadrature of psi(e^u) e^u in log coordinates; the gagliardo
    // member has an integrable singularity at 0 that linear panels cannot see
    double u_lo, u_hi;
    switch (s.family) {
      case KernelFamily::uniform:
        u_lo = std::log(eps) - 40.0;
        u_hi = std::log(eps);
        break;
      case KernelFamily::exponential:
        u_lo = std::log(eps) - 40.0;
        u_hi = std::log(eps) + std::log(50.0);
        break;
      default:  // gagliardo
        u_lo = -12.0 / eps;
        u_hi = 0.0;
        break;
    }
    const int n = 20000;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = u_lo + (u_hi - u_lo) * (i + 0.5) / n;
      const double r = std::exp(u);
      mass += kernel_density(s.family, eps, r) * r * ((u_hi - u_lo) / n);
    }
    const double defect = std::abs(mass - 1.0);
    rep.worst_mass_defect = std::max(rep.worst_mass_defect, defect);
    if (defect > 1e-3) rep.unit_mass = false;
  }
  // 1 - CDF(gamma) must decrease along the schedule and end up small
  double prev_tail = std::numeric_limits<double>::infinity();
  rep.tails_vanish = true;
  for (double eps : s.eps) {
    const double tail = 1.0 - kernel_cdf(s.family, eps, gamma);
    if (tail > prev_tail + 1e-12) rep.tails_vanish = false;
    prev_tail = tail;
  }
  rep.tail_at_smallest_eps = prev_tail;
  if (prev_tail > 0.25) rep.tails_vanish = false;
  return rep;
}

}  // namespace orlicz
