// Acceptance suite: one checkable criterion per case, each printing a single
// PASS/FAIL line with the measured numbers. Run with no argument for the full
// suite or with an index (1..10) for one criterion. Exit code = #failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "orlicz/assumptions.hpp"
#include "orlicz/experiment.hpp"
#include "orlicz/sharp_limit.hpp"

using namespace orlicz;

namespace {

struct Checker {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void info(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

KernelSchedule uniform_schedule(std::vector<double> eps, int nodes = 64) {
  KernelSchedule s;
  s.family = KernelFamily::uniform;
  s.eps = std::move(eps);
  s.r_nodes = nodes;
  return s;
}

// 1. linear 1-D benchmark: rho^eps matches (1-eps)/4 within 2% at each eps,
//    extrapolated limit within 1% of 1/4, wall time under 10 s.
void criterion_1(Checker& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 1e-3);
  const auto f = GridField::sample(dom, [](const Point& p) { return p[0]; });
  SharpQuadrature quad(PhiModel::power(2.0), f);
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025}, vals;
  for (double e : eps) {
    const double v = quad.rho(make_radial_rule(KernelFamily::uniform, e, dom, 64));
    vals.push_back(v);
    const double expected = (1.0 - e) / 4.0;
    c.expect(std::abs(v - expected) / expected <= 0.02,
             "rho at eps " + num(e) + " = " + num(v) + " vs " + num(expected));
  }
  const double limit = richardson_limit(eps, vals);
  c.expect(std::abs(limit - 0.25) / 0.25 <= 0.01, "extrapolated " + num(limit) + " vs 0.25");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 10.0, "runtime " + num(secs) + " s");
  c.info("limit " + num(limit) + ", " + num(secs) + " s");
}

// 2. norm limit on the same setup: extrapolated eps-norm within 2% of 1/2.
void criterion_2(Checker& c) {
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 1e-3);
  const auto f = GridField::sample(dom, [](const Point& p) { return p[0]; });
  SharpQuadrature quad(PhiModel::power(2.0), f);
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025}, vals;
  for (double e : eps) vals.push_back(quad.norm(make_radial_rule(KernelFamily::uniform, e, dom, 64), 1e-7));
  const double limit = richardson_limit(eps, vals);
  c.expect(std::abs(limit - 0.5) / 0.5 <= 0.02, "extrapolated norm " + num(limit) + " vs 0.5");
  c.info("norm limit " + num(limit));
}

// 3. scaling constant: closed form vs Monte Carlo within 3 standard errors
//    for n in {1,2}; c_1 = 1/2, c_2 = 4/(3 pi) within 1e-3 of quadrature.
void criterion_3(Checker& c) {
  c.expect(std::abs(c_n(1) - 0.5) < 1e-12, "c_1 = " + num(c_n(1)));
  c.expect(std::abs(c_n(2) - 4.0 / (3.0 * M_PI)) < 1e-12, "c_2 = " + num(c_n(2)));
  Rng rng(314159);
  for (int dim : {1, 2}) {
    const auto [mc, se] = oracles::mc_mean_abs_x1(dim, 1000000, rng);
    c.expect(std::abs(mc - c_n(dim)) <= 3.0 * se,
             "dim " + std::to_string(dim) + " MC " + num(mc) + " +- " + num(se));
  }
  const double quad = oracles::integrate_disk([](double x, double) { return std::abs(x); }, 1.0) / M_PI;
  c.expect(std::abs(c_n(2) - quad) <= 1e-3, "c_2 quadrature " + num(quad));
  c.info("c_2 = " + num(c_n(2)));
}

// 4. variable-exponent convergence with a log-Hoelder exponent, plus kernel
//    independence across the three families.
void criterion_4(Checker& c) {
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 5e-4);
  const auto model = PhiModel::variable_exponent(CoefficientField::log_holder(2.0, 1.0, make_point(0.0)));
  const auto entry = catalog_sin_pi();
  const auto f = sample_scalar(dom, entry);
  const auto g = sample_gradient(dom, entry);

  const double target = oracles::integrate_interval(
      [&](double x) {
        const double grad = M_PI * std::cos(M_PI * x);
        return eval_raw(model, make_point(x), 0.5 * std::abs(grad), 1);
      },
      0.0, 1.0);

  std::map<std::string, double> limits;
  for (auto family : {KernelFamily::uniform, KernelFamily::exponential, KernelFamily::gagliardo}) {
    KernelSchedule s;
    s.family = family;
    s.eps = {0.1, 0.05, 0.025};
    s.r_nodes = 64;
    ConvergenceOptions opts;
    opts.tolerance = 0.05;
    const auto rep = run_convergence(model, f, &g, s, opts);
    limits[to_string(family)] = rep.extrapolated_modular;
  }
  const double uni = limits.at("uniform");
  c.expect(std::abs(uni - target) / target <= 0.03,
           "uniform limit " + num(uni) + " vs quadrature target " + num(target));
  for (const auto& [name, v] : limits)
    c.expect(std::abs(v - uni) / target <= 0.05, name + " limit " + num(v) + " off the uniform one " + num(uni));
  c.info("target " + num(target) + ", uniform " + num(uni) + ", exponential " + num(limits.at("exponential")) +
         ", gagliardo " + num(limits.at("gagliardo")));
}

// 5. 2-D smooth convergence on the unit disk with a double-phase model and
//    Hoelder weight at h = 1/256, tolerance 5%.
void criterion_5(Checker& c) {
  const auto dom = GridDomain::build(DomainSpec::disk({0, 0}, 1.0), 1.0 / 256);
  const auto model =
      PhiModel::double_phase(2.0, 2.5, CoefficientField::holder_bump(0.0, 1.0, make_point(0.0, 0.0), 0.5));
  const auto entry = catalog_poly_well();
  const auto f = sample_scalar(dom, entry);
  const auto g = sample_gradient(dom, entry);
  ConvergenceOptions opts;
  opts.tolerance = 0.05;
  const auto rep = run_convergence(model, f, &g, uniform_schedule({0.125, 0.0625, 0.03125}), opts);
  c.expect(rep.status == ConvergenceStatus::converged,
           "status " + to_string(rep.status) + ", rel err " + num(rep.rel_err_modular));
  const double c2 = c_n(2);
  const double oracle = oracles::integrate_disk(
      [&](double x, double y) {
        const Point p = make_point(x, y);
        const Point gv = entry.grad(p, 2);
        return eval_raw(model, p, c2 * std::hypot(gv[0], gv[1]), 2);
      },
      1.0);
  c.expect(std::abs(rep.target_modular - oracle) / oracle <= 0.02,
           "grid target " + num(rep.target_modular) + " vs quadrature " + num(oracle));
  c.info("extrapolated " + num(rep.extrapolated_modular) + ", target " + num(rep.target_modular) + ", oracle " +
         num(oracle));
}

// 6. divergence detection for the quarter-power cusp: classification plus a
//    >= 1.5x increase across each halving of eps.
void criterion_6(Checker& c) {
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 1e-3);
  const auto entry = catalog_root_cusp(0.5, 0.25);
  const auto f = sample_scalar(dom, entry);
  const auto rep =
      run_convergence(PhiModel::power(2.0), f, nullptr, uniform_schedule({0.2, 0.1, 0.05, 0.025}), {});
  c.expect(rep.status == ConvergenceStatus::bounded_divergent_target, "status " + to_string(rep.status));
  std::string ratios;
  for (std::size_t i = 0; i + 1 < rep.rho_eps.size(); ++i) {
    const double ratio = rep.rho_eps[i + 1] / rep.rho_eps[i];
    ratios += (i ? ", " : "") + num(ratio);
    c.expect(ratio >= 1.5, "growth ratio " + num(ratio) + " at eps " + num(rep.eps[i + 1]));
  }
  c.info("ratios " + ratios);
}

// 7. lemma property suites with seeded randomized inputs, zero violations.
void criterion_7(Checker& c) {
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 1.0 / 512);

  // (a) weighted power-mean inequalities, 1e4 tuples per built-in family
  struct WpmCase {
    PhiModel model;
    double phi_down;
  };
  std::vector<WpmCase> wpm;
  wpm.push_back({PhiModel::power(2.0), 2.0});
  wpm.push_back({PhiModel::power(1.5), 1.5});
  wpm.push_back({PhiModel::variable_exponent(CoefficientField::linear_x(2.0, 1.0)), 3.0});
  wpm.push_back({PhiModel::double_phase(2.0, 2.5, CoefficientField::linear_x(0.0, 1.0)), 2.5});
  wpm.push_back({PhiModel::log_perturbed(CoefficientField::constant(2.0)), 2.5});
  wpm.push_back({make_table_model([](double t) { return t * t; }), 2.0});
  for (std::size_t i = 0; i < wpm.size(); ++i) {
    const auto cert = check_aInc_aDec(wpm[i].model, dom, wpm[i].phi_down, false, 4000, 171);
    c.expect(cert.verdict == Verdict::holds, "aDec certificate for family " + std::to_string(i));
    const double c_down = cert.constants.at("c_down") * (1 + 1e-9);
    const auto res = property_weighted_power_mean(wpm[i].model, dom, wpm[i].phi_down, c_down, 10000, 172);
    c.expect(res.pass && res.checked == 10000,
             "power-mean violations " + std::to_string(res.violations) + " in family " + std::to_string(i));
  }

  // (b) inverse/infimum commutation on 200 random balls
  {
    Rng rng(173);
    BallSampler sampler(dom, rng);
    const auto ve = PhiModel::variable_exponent(CoefficientField::linear_x(2.0, 1.0));
    const auto dp = PhiModel::double_phase(2.0, 2.5, CoefficientField::linear_x(0.0, 1.0));
    double worst = 0.0;
    for (int b = 0; b < 200; ++b) {
      const auto ball = sampler.draw();
      const auto& m = (b % 2 == 0) ? ve : dp;
      const double s = rng.log_uniform(1e-2, 1e3);
      const double lhs = envelope_inf_inverse(m, dom, ball.ids, s);
      double rhs = 0.0;
      for (auto id : ball.ids) rhs = std::max(rhs, inverse(m, dom.point_of(id), s));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(rhs, 1e-12));
    }
    c.expect(worst <= 1e-7, "commutation discrepancy " + num(worst));
    c.info("commutation worst rel diff " + num(worst));
  }

  // (c) Jensen key estimate at beta' = beta/4 on 200 balls
  for (const auto& model :
       {PhiModel::variable_exponent(CoefficientField::log_holder(2.0, 1.0, make_point(0.0))),
        PhiModel::double_phase(2.0, 2.5, CoefficientField::holder_bump(0.0, 1.0, make_point(0.3), 0.5))}) {
    const auto cert = certify_model(model, dom, 3000, 120, 174);
    c.expect(cert.theorem_assumptions_hold, "certificates for the Jensen model");
    const auto res = property_jensen_key(model, dom, cert.beta, cert.sigma, cert.h_const, 200, 175);
    c.expect(res.pass, "Jensen violations " + std::to_string(res.violations) + " at beta' = " +
                           num(cert.beta / 4.0));
  }

  // (d) pointwise vs envelope verdict agreement on 200 balls
  {
    const auto jump = PhiModel::variable_exponent(CoefficientField::step(2.0, 1.0, 0.5, 0.0));
    const auto lh = PhiModel::variable_exponent(CoefficientField::log_holder(2.0, 1.0, make_point(0.0)));
    for (const auto& [model, beta] :
         std::vector<std::pair<PhiModel, double>>{{PhiModel::power(2.0), 1.0}, {lh, 0.5}, {jump, 0.7}}) {
      const auto agg = a1_form_agreement(model, dom, beta, 1.0, 200, 176);
      c.expect(agg.envelope_vs_pointwise_mismatch == 0,
               "pointwise/envelope mismatches " + std::to_string(agg.envelope_vs_pointwise_mismatch));
      c.expect(agg.envelope_vs_inverse_mismatch == 0,
               "inverse-form mismatches " + std::to_string(agg.envelope_vs_inverse_mismatch));
    }
  }

  // (e) mollifier commutation on 100 random (x, r, delta)
  {
    const auto fine = GridDomain::build(DomainSpec::interval(0, 1), 1.0 / 256);
    const auto f = GridField::sample(fine, [](const Point& p) { return std::sin(9.0 * p[0]) + p[0] * p[0]; });
    Rng rng(177);
    int checked = 0;
    double worst = 0.0;
    while (checked < 100) {
      const int K = 4 + static_cast<int>(rng.index(16));
      const auto st = fine.make_stencil(K);
      const double delta = rng.uniform(2.5, 6.0) * fine.spacing();
      const auto centers = fine.interior_ids(st.r_eff + delta + fine.spacing());
      if (centers.empty()) continue;
      const auto xid = centers[rng.index(centers.size())];
      const Point x = fine.point_of(xid);

      const double lhs = sharp_average(mollify(f, delta), x, st.r_eff);
      const auto sweep = sharp_sweep(f, st);
      GridField msharp(fine, 1);
      for (std::size_t i = 0; i < sweep.centers.size(); ++i) msharp.set(sweep.centers[i], 0, sweep.value[i]);
      const double rhs = mollify(msharp, delta).at(xid);
      worst = std::max(worst, lhs - rhs);
      ++checked;
    }
    c.expect(worst <= 1e-9, "commutation defect " + num(worst));
    c.info("mollifier commutation worst defect " + num(worst));
  }
}

// 8. sharp-operator exactness for affine fields in 1-D and 2-D.
void criterion_8(Checker& c) {
  for (int dim : {1, 2}) {
    const double h = dim == 1 ? 1e-3 : 1.0 / 128;
    const auto dom = dim == 1 ? GridDomain::build(DomainSpec::interval(0, 1), h)
                              : GridDomain::build(DomainSpec::disk({0, 0}, 1.0), h);
    const auto entry = dim == 1 ? catalog_linear({1.2}, 0.3) : catalog_linear({0.8, -0.5}, 0.2);
    const auto f = sample_scalar(dom, entry);
    const Point g0 = entry.grad(make_point(0.0), dim);
    double gn = 0.0;
    for (int d = 0; d < dim; ++d) gn += g0[d] * g0[d];
    gn = std::sqrt(gn);
    const double cn = c_n(dim);
    Rng rng(541 + dim);
    int checked = 0;
    double worst = 0.0;
    while (checked < 100) {
      const auto id = static_cast<std::int32_t>(rng.index(dom.n_active()));
      const double dmax = dom.distance(id);
      if (dmax < 8 * h) continue;
      const double r = rng.log_uniform(4.5 * h, 0.9 * dmax);
      const Point x = dom.point_of(id);
      const double err = std::abs(sharp_average(f, x, r) / r - cn * gn);
      worst = std::max(worst, err * r / h);
      c.expect(err <= 5.0 * h / r, "dim " + std::to_string(dim) + ": error " + num(err) + " at r " + num(r));
      ++checked;
    }
    c.info("dim " + std::to_string(dim) + " worst err*r/h " + num(worst));
  }
}

// 9. Luxemburg norm equals the closed-form discrete L^p norm on random fields.
void criterion_9(Checker& c) {
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 1e-3);
  Rng rng(653);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto model = PhiModel::power(p);
    for (int k = 0; k < 50; ++k) {
      GridField f(dom, 1);
      for (std::size_t i = 0; i < dom.n_active(); ++i)
        f.set(static_cast<std::int32_t>(i), 0, rng.uniform(-2.0, 2.0));
      const double expected = oracles::discrete_lp(f, p);
      const double got = luxemburg_norm(model, f, 1e-8);
      worst = std::max(worst, std::abs(got - expected) / expected);
    }
  }
  c.expect(worst <= 1e-5, "worst rel deviation " + num(worst));
  c.info("worst rel deviation " + num(worst));
}

// 10. growth-exponent upper bound: measured constant varies by < 2x across
//     the schedule for every smooth catalog entry.
void criterion_10(Checker& c) {
  const auto sched = uniform_schedule({0.2, 0.1, 0.05, 0.025});
  for (int dim : {1, 2}) {
    const double h = dim == 1 ? 1e-3 : 1.0 / 64;
    const auto dom = dim == 1 ? GridDomain::build(DomainSpec::interval(0, 1), h)
                              : GridDomain::build(DomainSpec::disk({0, 0}, 1.0), h);
    const auto model = PhiModel::power(2.0);
    for (const auto& entry : smooth_catalog(dim)) {
      const auto f = sample_scalar(dom, entry);
      const auto g = sample_gradient(dom, entry);
      const auto res = upper_bound_check(model, f, g, sched, 2.0, 2.0);
      c.expect(res.pass, "dim " + std::to_string(dim) + " entry " + entry.name + ": c in [" + num(res.c_min) +
                             ", " + num(res.c_max) + "]");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria = {
      {"linear 1-D benchmark matches (1-eps)/4 and extrapolates to 1/4", criterion_1},
      {"eps-norm extrapolates to c_1 ||f'||_L2 = 1/2", criterion_2},
      {"scaling constant: closed form, Monte Carlo, quadrature", criterion_3},
      {"log-Hoelder variable exponent: quadrature target and kernel independence", criterion_4},
      {"double-phase disk at h=1/256 converges within 5%", criterion_5},
      {"quarter-power cusp classified divergent with 1.5x growth per halving", criterion_6},
      {"lemma property suites: zero violations", criterion_7},
      {"sharp-operator exactness on affine fields", criterion_8},
      {"Luxemburg norm equals the discrete L^p norm", criterion_9},
      {"upper-bound constant stable within 2x across the schedule", criterion_10},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "usage: " << argv[0] << " [1.." << criteria.size() << "]\n";
    return 64;
  }

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    Checker c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %zu: %s%s%s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  return failures;
}
