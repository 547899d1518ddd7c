#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "orlicz/assumptions.hpp"
#include "orlicz/function_catalog.hpp"
#include "orlicz/report_io.hpp"
#include "orlicz/sharp_limit.hpp"

namespace orlicz {

/// Exit codes shared by the CLI verbs.
enum ExitCode : int { exit_ok = 0, exit_config_error = 1, exit_assumption_violated = 2, exit_inconclusive = 3 };

/// One experiment: a domain, a Phi-model, a test function, and a kernel
/// schedule, plus tolerances and a seed. Round-trips through JSON.
struct ExperimentConfig {
  json domain_spec;
  double grid_h = 0.01;
  json phi_spec;
  json function_spec;
  KernelSchedule kernel;
  double converged_tol = 0.05;
  double norm_tol = 1e-6;
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  static ExperimentConfig from_json(const json& j) {
    ExperimentConfig c;
    c.domain_spec = j.at("domain");
    c.grid_h = j.at("grid_h").get<double>();
    c.phi_spec = j.at("phi");
    c.function_spec = j.at("function");
    c.kernel = KernelSchedule::from_json(j.at("kernel"));
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      if (t.contains("converged_rel")) c.converged_tol = t.at("converged_rel").get<double>();
      if (t.contains("norm_tol")) c.norm_tol = t.at("norm_tol").get<double>();
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (!(c.grid_h > 0)) throw input_error("grid_h must be positive");
    if (!(c.converged_tol > 0) || !(c.norm_tol > 0)) throw input_error("tolerances must be positive");
    return c;
  }

  json to_json() const {
    return json{{"domain", domain_spec},
                {"grid_h", grid_h},
                {"phi", phi_spec},
                {"function", function_spec},
                {"kernel", kernel.to_json()},
                {"tolerances", json{{"converged_rel", converged_tol}, {"norm_tol", norm_tol}}},
                {"seed", seed},
                {"out_dir", out_dir}};
  }

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open config '" + path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw input_error("config '" + path + "' is not valid JSON: " + e.what());
    }
    try {
      return from_json(j);
    } catch (const json::exception& e) {
      throw input_error("config '" + path + "': " + e.what());
    }
  }
};

/// The domain sits behind a stable pointer because the fields reference it.
struct ExperimentSetup {
  std::shared_ptr<const GridDomain> domain;
  PhiModel model;
  CatalogEntry entry;
  GridField field;
  GridField grad;
};

inline ExperimentSetup build_setup(const ExperimentConfig& c) {
  auto dom = std::make_shared<const GridDomain>(GridDomain::build(DomainSpec::from_json(c.domain_spec), c.grid_h));
  PhiModel model = PhiModel::from_json(c.phi_spec);
  const double measured = validate_weak_phi(model, dom.get());
  if (measured > model.weak_constant) model.weak_constant = measured;
  CatalogEntry entry = catalog_entry_from_json(c.function_spec);
  GridField field = sample_scalar(*dom, entry);
  GridField grad = sample_gradient(*dom, entry);
  return ExperimentSetup{std::move(dom), std::move(model), std::move(entry), std::move(field), std::move(grad)};
}

/// Certifies the assumptions the localization limit needs; theorem-critical
/// ones are doubling/aDec, aInc, and the (A)-family.
struct CertifySummary {
  std::vector<AssumptionReport> reports;
  bool theorem_assumptions_hold = true;
  double beta = 1.0, sigma = 1.0, h_const = 0.0;
  double phi_up = 1.0, phi_down = 2.0;
};

inline std::pair<double, double> search_growth_exponents(const PhiModel& m, const GridDomain& dom,
                                                         std::int64_t n_samples = 2000, std::uint64_t seed = 11) {
  double up = 1.0;
  for (double e : {3.0, 2.5, 2.0, 1.75, 1.5, 1.25, 1.1}) {
    auto rep = check_aInc_aDec(m, dom, e, /*increasing=*/true, n_samples, seed);
    if (rep.verdict == Verdict::holds && rep.constants.at("c_up") < 16.0) {
      up = e;
      break;
    }
  }
  double down = 0.0;
  for (double e : {1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 6.0}) {
    auto rep = check_aInc_aDec(m, dom, e, /*increasing=*/false, n_samples, seed + 1);
    if (rep.verdict == Verdict::holds && rep.constants.at("c_down") < 16.0) {
      down = e;
      break;
    }
  }
  if (down == 0.0) down = 6.0;
  return {up, std::max(down, up)};
}

inline CertifySummary certify_model(const PhiModel& model, const GridDomain& dom, std::int64_t n_scalar = 10000,
                                    int n_balls = 200, std::uint64_t seed = 1) {
  CertifySummary s;
  auto [up, down] = search_growth_exponents(model, dom, std::max<std::int64_t>(n_scalar / 5, 500), seed + 10);
  s.phi_up = up;
  s.phi_down = down;

  auto push = [&](AssumptionReport rep, bool critical) {
    if (critical && rep.verdict == Verdict::violated) s.theorem_assumptions_hold = false;
    s.reports.push_back(std::move(rep));
  };

  push(check_doubling(model, dom, n_scalar, seed), true);
  push(check_aInc_aDec(model, dom, s.phi_up, true, n_scalar, seed + 1), true);
  push(check_aInc_aDec(model, dom, s.phi_down, false, n_scalar, seed + 2), true);

  auto a0 = check_A0(model, dom, seed + 3);
  const bool a0_ok = a0.verdict == Verdict::holds;
  if (a0_ok) {
    s.beta = a0.constants.at("beta");
    s.sigma = a0.constants.at("sigma");
  }
  push(std::move(a0), true);

  if (a0_ok) {
    auto a1 = check_A1(model, dom, s.beta, s.sigma, n_balls, seed + 4);
    if (a1.verdict == Verdict::violated && a1.constants.count("largest_feasible_beta") &&
        a1.constants.at("largest_feasible_beta") > 0) {
      // the model satisfies A1 with a smaller beta; rerun the certificate there
      const double b2 = a1.constants.at("largest_feasible_beta");
      auto retry = check_A1(model, dom, b2, s.sigma, n_balls, seed + 4);
      if (retry.verdict == Verdict::holds) {
        s.beta = b2;
        a1 = std::move(retry);
      }
    }
    push(std::move(a1), true);

    auto a2 = check_A2(model, dom, s.beta, s.sigma, nullptr, n_scalar, seed + 5);
    if (a2.verdict == Verdict::holds && a2.constants.count("h_const")) s.h_const = a2.constants.at("h_const");
    push(std::move(a2), true);

    push(check_loc(model, dom, s.beta * s.sigma), false);
  }
  return s;
}

namespace detail {

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw input_error("cannot create output directory '" + dir + "'");
}

}  // namespace detail

/// The `converge` verb: runs the schedule, writes report.json / report.csv /
/// plot.svg / assumption JSONs. Returns exit_ok or exit_inconclusive.
inline int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  ExperimentSetup setup = build_setup(cfg);
  ConvergenceOptions opts;
  opts.tolerance = cfg.converged_tol;
  opts.norm_tol = cfg.norm_tol;
  opts.seed = cfg.seed;
  ConvergenceReport rep = run_convergence(setup.model, setup.field, &setup.grad, cfg.kernel, opts);

  detail::ensure_dir(cfg.out_dir);
  const auto base = std::filesystem::path(cfg.out_dir);
  {
    std::ofstream out(base / "report.json");
    out << rep.to_json().dump(2) << '\n';
  }
  write_convergence_csv(rep, (base / "report.csv").string());
  write_convergence_svg(rep, (base / "plot.svg").string());

  CertifySummary cert = certify_model(setup.model, *setup.domain, 2000, 50, cfg.seed + 100);
  json creports = json::array();
  for (const auto& r : cert.reports) creports.push_back(r.to_json());
  {
    std::ofstream out(base / "assumptions.json");
    out << creports.dump(2) << '\n';
  }

  log << "status " << to_string(rep.status) << ", extrapolated " << fmt_g(rep.extrapolated_modular) << " vs target "
      << fmt_g(rep.target_modular) << " (rel err " << fmt_g(rep.rel_err_modular) << ")\n";
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    log << "  eps " << fmt_g(rep.eps[i]) << ": rho " << fmt_g(rep.rho_eps[i]) << ", norm " << fmt_g(rep.eps_norms[i])
        << '\n';
  return rep.status == ConvergenceStatus::inconclusive ? exit_inconclusive : exit_ok;
}

/// The `certify` verb: all certifiers at full sample counts, JSON reports on
/// disk, nonzero exit when a theorem-critical assumption fails.
inline int run_certify(const ExperimentConfig& cfg, std::ostream& log) {
  GridDomain dom = GridDomain::build(DomainSpec::from_json(cfg.domain_spec), cfg.grid_h);
  PhiModel model = PhiModel::from_json(cfg.phi_spec);
  CertifySummary cert = certify_model(model, dom, 10000, 200, cfg.seed + 1);

  detail::ensure_dir(cfg.out_dir);
  const auto base = std::filesystem::path(cfg.out_dir);
  json arr = json::array();
  for (const auto& r : cert.reports) arr.push_back(r.to_json());
  {
    std::ofstream out(base / "assumptions.json");
    out << arr.dump(2) << '\n';
  }
  for (const auto& r : cert.reports)
    log << r.assumption << ": " << to_string(r.verdict) << '\n';
  log << "growth exponents: up " << fmt_g(cert.phi_up) << ", down " << fmt_g(cert.phi_down) << '\n';
  return cert.theorem_assumptions_hold ? exit_ok : exit_assumption_violated;
}

/// The `report` verb: re-renders CSV and SVG from a stored report and checks
/// that the stored relative errors recompute from the raw values.
inline int rerender_report(const std::string& json_path, const std::string& out_dir, std::ostream& log) {
  std::ifstream in(json_path);
  if (!in) throw input_error("cannot open report '" + json_path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw input_error(std::string("report is not valid JSON: ") + e.what());
  }
  ConvergenceReport rep = ConvergenceReport::from_json(j);
  const double em = relative_error(rep.extrapolated_modular, rep.target_modular);
  const double en = relative_error(rep.extrapolated_norm, rep.target_norm);
  if (std::abs(em - rep.rel_err_modular) > 1e-9 || std::abs(en - rep.rel_err_norm) > 1e-9)
    throw input_error("stored relative errors do not recompute from the raw values");
  detail::ensure_dir(out_dir);
  const auto base = std::filesystem::path(out_dir);
  write_convergence_csv(rep, (base / "report.csv").string());
  write_convergence_svg(rep, (base / "plot.svg").string());
  log << "report ok: " << rep.eps.size() << " eps values, status " << to_string(rep.status) << '\n';
  return exit_ok;
}

}  // namespace orlicz
