#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/function_catalog.hpp"
#include "orlicz/grid_field.hpp"
#include "orlicz/kernels.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/phi_model.hpp"

namespace orlicz {

/// Radial quadrature of the smoothed difference quotient for one field.
/// Sharp averages per radius class are cached, so re-evaluations at different
/// field scales (norm bisection, scaling checks) reuse the expensive sweeps:
/// the sharp operator is positively homogeneous in the field.
class SharpQuadrature {
public:
  SharpQuadrature(const PhiModel& model, const GridField& f) : f_(&f), phi_(model, f.domain()) {
    f.check_finite();
  }

  void prepare(const RadialRule& rule) {
    for (const auto& node : rule.nodes)
      if (!sweeps_.count(node.K)) {
        const auto st = f_->domain().make_stencil(node.K);
        sweeps_.emplace(node.K, sharp_sweep(*f_, st));
      }
  }

  /// rho of f/lambda under the rule: sum over radius nodes of
  /// weight * integral over the interior set of phi(x, M#/(r lambda)).
  double rho(const RadialRule& rule, double lambda = 1.0) {
    prepare(rule);
    const double cell = f_->domain().cell_measure();
    double total = 0.0;
    for (const auto& node : rule.nodes) {
      const auto& sweep = sweeps_.at(node.K);
      const double inv = 1.0 / (node.r * lambda);
      const double inner = detail::sum_over(
          sweep.centers.size(), [&](std::size_t i) { return phi_(sweep.centers[i], sweep.value[i] * inv); });
      total += node.weight * inner * cell;
      if (std::isinf(total)) return total;
    }
    return total;
  }

  /// The eps-norm: inf { lambda > 0 : rho(f/lambda) <= 1 }, same bisection
  /// contract as the Luxemburg norm.
  double norm(const RadialRule& rule, double tol = 1e-6) {
    prepare(rule);
    bool all_zero = true;
    for (const auto& node : rule.nodes) {
      const auto& sweep = sweeps_.at(node.K);
      for (double v : sweep.value)
        if (v != 0.0) {
          all_zero = false;
          break;
        }
      if (!all_zero) break;
    }
    if (all_zero) return 0.0;
    return unit_modular_scale([&](double lambda) { return rho(rule, lambda); }, tol);
  }

  const NodePhi& node_phi() const { return phi_; }

private:
  const GridField* f_;
  NodePhi phi_;
  std::map<int, SharpSweep> sweeps_;
};

/// One-shot evaluation of the smoothed difference-quotient functional.
inline ExtNonneg rho_sharp_eps(const PhiModel& model, const GridField& f, const RadialRule& rule) {
  SharpQuadrature q(model, f);
  return ExtNonneg(q.rho(rule));
}

inline double eps_norm(const PhiModel& model, const GridField& f, const RadialRule& rule, double tol = 1e-6) {
  SharpQuadrature q(model, f);
  return q.norm(rule, tol);
}

// ---------------------------------------------------------------------------
// convergence study

enum class ConvergenceStatus { converged, bounded_divergent_target, inconclusive };

inline std::string to_string(ConvergenceStatus s) {
  switch (s) {
    case ConvergenceStatus::converged: return "CONVERGED";
    case ConvergenceStatus::bounded_divergent_target: return "BOUNDED-DIVERGENT-TARGET";
    case ConvergenceStatus::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

inline ConvergenceStatus convergence_status_from_string(const std::string& s) {
  if (s == "CONVERGED") return ConvergenceStatus::converged;
  if (s == "BOUNDED-DIVERGENT-TARGET") return ConvergenceStatus::bounded_divergent_target;
  if (s == "INCONCLUSIVE") return ConvergenceStatus::inconclusive;
  throw input_error("unknown convergence status '" + s + "'");
}

struct ConvergenceOptions {
  double tolerance = 0.05;   // relative acceptance band around the target
  double norm_tol = 1e-6;    // norm bisection tolerance
  double growth_ratio = 1.2; // per-step growth flagging divergence
  double growth_total = 2.0; // total growth flagging divergence
  std::uint64_t seed = 0;
};

struct ConvergenceReport {
  std::string kernel_family;
  int r_nodes = 64;
  std::vector<double> eps, rho_eps, eps_norms, sub_resolution_mass;
  double target_modular = 0, target_norm = 0;
  double extrapolated_modular = 0, extrapolated_norm = 0;
  double rel_err_modular = 0, rel_err_norm = 0;
  ConvergenceStatus status = ConvergenceStatus::inconclusive;
  double tolerance = 0.05;
  double equiv_band = 1.0;
  int dim = 1;
  double grid_h = 0;
  std::uint64_t n_active = 0;
  std::uint64_t seed = 0;

  json to_json() const {
    return json{{"kernel_family", kernel_family},
                {"r_nodes", r_nodes},
                {"eps", eps},
                {"rho_eps", rho_eps},
                {"eps_norm", eps_norms},
                {"sub_resolution_mass", sub_resolution_mass},
                {"target_modular", target_modular},
                {"target_norm", target_norm},
                {"extrapolated_modular", extrapolated_modular},
                {"extrapolated_norm", extrapolated_norm},
                {"rel_err_modular", rel_err_modular},
                {"rel_err_norm", rel_err_norm},
                {"status", to_string(status)},
                {"tolerance", tolerance},
                {"equiv_band", equiv_band},
                {"grid", json{{"dim", dim}, {"h", grid_h}, {"n_active", n_active}}},
                {"seed", seed}};
  }

  static ConvergenceReport from_json(const json& j) {
    ConvergenceReport r;
    r.kernel_family = j.at("kernel_family").get<std::string>();
    r.r_nodes = j.at("r_nodes").get<int>();
    r.eps = j.at("eps").get<std::vector<double>>();
    r.rho_eps = j.at("rho_eps").get<std::vector<double>>();
    r.eps_norms = j.at("eps_norm").get<std::vector<double>>();
    r.sub_resolution_mass = j.at("sub_resolution_mass").get<std::vector<double>>();
    r.target_modular = j.at("target_modular").get<double>();
    r.target_norm = j.at("target_norm").get<double>();
    r.extrapolated_modular = j.at("extrapolated_modular").get<double>();
    r.extrapolated_norm = j.at("extrapolated_norm").get<double>();
    r.rel_err_modular = j.at("rel_err_modular").get<double>();
    r.rel_err_norm = j.at("rel_err_norm").get<double>();
    r.status = convergence_status_from_string(j.at("status").get<std::string>());
    r.tolerance = j.at("tolerance").get<double>();
    r.equiv_band = j.at("equiv_band").get<double>();
    r.dim = j.at("grid").at("dim").get<int>();
    r.grid_h = j.at("grid").at("h").get<double>();
    r.n_active = j.at("grid").at("n_active").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  }
};

/// Linear-in-eps extrapolation from the last two entries of a sequence
/// sampled at decreasing eps.
inline double richardson_limit(const std::vector<double>& eps, const std::vector<double>& v) {
  const std::size_t n = eps.size();
  if (n == 1) return v[0];
  const double e1 = eps[n - 2], e2 = eps[n - 1];
  return (v[n - 1] * e1 - v[n - 2] * e2) / (e1 - e2);
}

inline double relative_error(double value, double target) {
  const double denom = std::max(std::abs(target), 1e-12);
  return std::abs(value - target) / denom;
}

/// Evaluates rho and the eps-norm along the schedule, extrapolates, and
/// classifies the run against the gradient target.
inline ConvergenceReport run_convergence(const PhiModel& model, const GridField& f, const GridField* grad_closed_form,
                                         const KernelSchedule& sched, const ConvergenceOptions& opts = {}) {
  const GridDomain& dom = f.domain();
  for (double e : sched.eps)
    if (e < eps_min_for_grid(sched.family, dom))
      throw input_error("schedule eps below the grid's resolvable minimum for this kernel family");

  ConvergenceReport rep;
  rep.kernel_family = to_string(sched.family);
  rep.r_nodes = sched.r_nodes;
  rep.tolerance = opts.tolerance;
  rep.equiv_band = model.equiv_band;
  rep.dim = dom.dim();
  rep.grid_h = dom.spacing();
  rep.n_active = dom.n_active();
  rep.seed = opts.seed;

  const GridField grad = grad_closed_form ? GridField(*grad_closed_form) : gradient_fd(f);
  const GridField gmag = grad.magnitude();
  const double cn = c_n(dom.dim());
  rep.target_modular = modular(model, gmag, cn).value();
  rep.target_norm = cn * luxemburg_norm(model, gmag, opts.norm_tol);

  SharpQuadrature quad(model, f);
  for (double e : sched.eps) {
    const RadialRule rule = make_radial_rule(sched.family, e, dom, sched.r_nodes);
    rep.eps.push_back(e);
    rep.sub_resolution_mass.push_back(rule.sub_resolution_mass);
    rep.rho_eps.push_back(quad.rho(rule));
    rep.eps_norms.push_back(quad.norm(rule, opts.norm_tol));
  }

  bool all_finite = true;
  for (double v : rep.rho_eps) all_finite = all_finite && std::isfinite(v);

  bool growing = all_finite && rep.rho_eps.size() >= 2 && rep.rho_eps.front() > 0;
  if (growing) {
    for (std::size_t i = 0; i + 1 < rep.rho_eps.size(); ++i)
      if (!(rep.rho_eps[i + 1] >= rep.rho_eps[i] * opts.growth_ratio)) growing = false;
    if (growing && !(rep.rho_eps.back() >= rep.rho_eps.front() * opts.growth_total)) growing = false;
  }

  if (growing) {
    rep.status = ConvergenceStatus::bounded_divergent_target;
    rep.extrapolated_modular = rep.rho_eps.back();
    rep.extrapolated_norm = rep.eps_norms.back();
    rep.rel_err_modular = relative_error(rep.extrapolated_modular, rep.target_modular);
    rep.rel_err_norm = relative_error(rep.extrapolated_norm, rep.target_norm);
    return rep;
  }

  if (!all_finite) {
    rep.status = ConvergenceStatus::inconclusive;
    rep.extrapolated_modular = rep.rho_eps.back();
    rep.extrapolated_norm = rep.eps_norms.back();
    return rep;
  }

  rep.extrapolated_modular = richardson_limit(rep.eps, rep.rho_eps);
  rep.extrapolated_norm = richardson_limit(rep.eps, rep.eps_norms);
  rep.rel_err_modular = relative_error(rep.extrapolated_modular, rep.target_modular);
  rep.rel_err_norm = relative_error(rep.extrapolated_norm, rep.target_norm);

  bool ok;
  if (rep.target_modular <= 1e-12) {
    ok = std::abs(rep.extrapolated_modular) <= 1e-9;
  } else if (model.equiv_band > 1.0) {
    // weak models: targets hold inside a constant-factor band
    const double band = model.equiv_band * (1.0 + opts.tolerance);
    const double ratio = rep.extrapolated_modular / rep.target_modular;
    ok = ratio <= band && ratio >= 1.0 / band;
  } else {
    ok = rep.rel_err_modular <= opts.tolerance;
  }
  rep.status = ok ? ConvergenceStatus::converged : ConvergenceStatus::inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// growth-exponent upper bound

/// Checks rho^eps(f) <= c max{ ||grad f||^(up), ||grad f||^(down) } across the
/// schedule and reports the measured constants; passes when the measured c is
/// stable within a factor 2.
struct UpperBoundResult {
  bool pass = false;
  double denom = 0.0;
  std::vector<double> c_of_eps;
  double c_min = 0.0, c_max = 0.0;
};

inline UpperBoundResult upper_bound_check(const PhiModel& model, const GridField& f, const GridField& grad,
                                          const KernelSchedule& sched, double phi_up, double phi_down,
                                          double norm_tol = 1e-6) {
  const GridDomain& dom = f.domain();
  UpperBoundResult res;
  const GridField gmag = grad.magnitude();
  const double nrm = luxemburg_norm(model, gmag, norm_tol);
  res.denom = std::max(std::pow(nrm, phi_up), std::pow(nrm, phi_down));
  if (res.denom <= 0) {
    // zero gradient: rho must vanish as well
    SharpQuadrature quad(model, f);
    res.pass = true;
    for (double e : sched.eps) {
      const double r = quad.rho(make_radial_rule(sched.family, e, dom, sched.r_nodes));
      res.c_of_eps.push_back(r);
      if (r != 0.0) res.pass = false;
    }
    return res;
  }
  SharpQuadrature quad(model, f);
  res.c_min = kInf;
  res.c_max = 0.0;
  for (double e : sched.eps) {
    const double r = quad.rho(make_radial_rule(sched.family, e, dom, sched.r_nodes));
    const double c = r / res.denom;
    res.c_of_eps.push_back(c);
    res.c_min = std::min(res.c_min, c);
    res.c_max = std::max(res.c_max, c);
  }
  res.pass = std::isfinite(res.c_max) && (res.c_min <= 0 ? false : res.c_max / res.c_min < 2.0);
  return res;
}

}  // namespace orlicz
