#include <catch2/catch_amalgamated.hpp>

#include "orlicz/function_catalog.hpp"
#include "orlicz/grid_field.hpp"
#include "orlicz/kernels.hpp"
#include "orlicz/rng.hpp"

using namespace orlicz;
using Catch::Approx;

TEST_CASE("ball averages on closed forms", "[field]") {
  const auto dom = GridDomain::build(DomainSpec::interval(-1, 1), 0.001);
  const auto constf = GridField::sample(dom, [](const Point&) { return 3.25; });
  CHECK(ball_average(constf, make_point(0.1), 0.2) == Approx(3.25));

  const auto lin = GridField::sample(dom, [](const Point& p) { return p[0]; });
  Rng rng(4);
  for (int k = 0; k < 30; ++k) {
    // node-centered balls have symmetric stencils: the mean is exact
    const auto id = static_cast<std::int32_t>(rng.index(dom.n_active()));
    const Point c = dom.point_of(id);
    if (dom.distance(id) < 0.35) continue;
    const double r = rng.uniform(0.05, 0.3);
    CHECK(ball_average(lin, c, r) == Approx(c[0]).margin(1e-12));
    // off-node centers see the lattice offset, an O(h) effect
    const Point c2 = make_point(c[0] + 0.37 * dom.spacing());
    CHECK(ball_average(lin, c2, r) == Approx(c2[0]).margin(0.6 * dom.spacing()));
  }

  const auto quad = GridField::sample(dom, [](const Point& p) { return p[0] * p[0]; });
  for (double r : {0.1, 0.2, 0.4}) {
    CHECK(ball_average(quad, make_point(0.0), r) == Approx(r * r / 3.0).epsilon(2e-2));
  }

  CHECK_THROWS_AS(ball_average(lin, make_point(0.999), 0.1), ball_error);
  CHECK_THROWS_AS(ball_average(lin, make_point(0.0), 0.0015), ball_error);  // below the node minimum
}

TEST_CASE("sharp averages on closed forms", "[field]") {
  const auto dom = GridDomain::build(DomainSpec::interval(-1, 1), 0.001);
  const auto constf = GridField::sample(dom, [](const Point&) { return -2.0; });
  CHECK(sharp_average(constf, make_point(0.2), 0.15) == Approx(0.0).margin(1e-13));

  // linear: M# = r/2, the equality case of the pointwise gradient estimate
  const auto lin = GridField::sample(dom, [](const Point& p) { return p[0]; });
  for (double r : {0.1, 0.25}) {
    CHECK(sharp_average(lin, make_point(0.0), r) == Approx(r / 2.0).margin(0.002));
  }

  // |x| at the kink: mean is r/2, deviation r/4
  const auto vee = GridField::sample(dom, [](const Point& p) { return std::abs(p[0]); });
  for (double r : {0.1, 0.3}) {
    CHECK(ball_average(vee, make_point(0.0), r) == Approx(r / 2.0).margin(0.002));
    CHECK(sharp_average(vee, make_point(0.0), r) == Approx(r / 4.0).margin(0.002));
  }
}

TEST_CASE("sharp sweep matches the per-center operator at snapped radii", "[field]") {
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 0.005);
  const auto f = GridField::sample(dom, [](const Point& p) { return std::sin(3.0 * p[0]) + 0.5 * p[0]; });
  const auto st = dom.make_stencil(9);
  const auto sweep = sharp_sweep(f, st);
  REQUIRE(!sweep.centers.empty());
  for (std::size_t i = 0; i < sweep.centers.size(); i += 17) {
    const Point c = dom.point_of(sweep.centers[i]);
    CHECK(sweep.value[i] == Approx(sharp_average(f, c, st.r_eff)).epsilon(1e-12));
  }
}

TEST_CASE("finite-difference gradients converge at second order", "[field]") {
  const auto entry = catalog_sin_pi();
  double prev_err = 0.0;
  for (int level = 0; level < 3; ++level) {
    const double h = 0.02 / (1 << level);
    const auto dom = GridDomain::build(DomainSpec::interval(0, 1), h);
    const auto f = sample_scalar(dom, entry);
    const auto g = gradient_fd(f);
    double err = 0.0;
    for (std::size_t i = 0; i < dom.n_active(); ++i) {
      const auto id = static_cast<std::int32_t>(i);
      if (dom.distance(id) <= h * 1.5) continue;  // interior nodes: central stencils
      err = std::max(err, std::abs(g.at(id, 0) - entry.grad(dom.point_of(id), 1)[0]));
    }
    CHECK(err <= 2.0 * h * h * entry.hess_bound);
    if (level > 0) CHECK(err < 0.4 * prev_err);
    prev_err = err;
  }

  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 0.01);
  const auto lin = sample_scalar(dom, catalog_linear({1.5}, 0.2));
  const auto glin = gradient_fd(lin);
  for (std::size_t i = 0; i < dom.n_active(); i += 11)
    CHECK(glin.at(static_cast<std::int32_t>(i), 0) == Approx(1.5).epsilon(1e-10));

  const auto c = GridField::sample(dom, [](const Point&) { return 7.0; });
  CHECK(gradient_fd(c).max_abs() == Approx(0.0).margin(1e-12));
}

TEST_CASE("2-D gradients on the disk", "[field]") {
  const auto dom = GridDomain::build(DomainSpec::disk({0, 0}, 1.0), 1.0 / 64);
  const auto entry = catalog_sinprod();
  const auto f = sample_scalar(dom, entry);
  const auto g = gradient_fd(f);
  double err = 0.0;
  for (std::size_t i = 0; i < dom.n_active(); ++i) {
    const auto id = static_cast<std::int32_t>(i);
    if (dom.distance(id) <= 2.0 / 64) continue;
    const Point exact = entry.grad(dom.point_of(id), 2);
    err = std::max(err, std::hypot(g.at(id, 0) - exact[0], g.at(id, 1) - exact[1]));
  }
  CHECK(err <= 3.0 * entry.hess_bound * (1.0 / 64) * (1.0 / 64));
}

TEST_CASE("mollification: normalization, linear invariance, contraction", "[field]") {
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 0.005);
  const auto constf = GridField::sample(dom, [](const Point&) { return 1.7; });
  const auto mc = mollify(constf, 0.05);
  for (auto id : dom.interior_ids(0.05)) CHECK(mc.at(id) == Approx(1.7).epsilon(1e-12));

  const auto lin = GridField::sample(dom, [](const Point& p) { return 2.0 * p[0] - 0.3; });
  const auto ml = mollify(lin, 0.04);
  for (auto id : dom.interior_ids(0.04)) CHECK(ml.at(id) == Approx(lin.at(id)).margin(1e-12));

  const auto rough = GridField::sample(dom, [](const Point& p) { return std::sin(40.0 * p[0]); });
  const auto mr = mollify(rough, 0.06);
  double mx = 0.0;
  for (auto id : dom.interior_ids(0.06)) mx = std::max(mx, std::abs(mr.at(id)));
  CHECK(mx <= rough.max_abs() + 1e-12);

  CHECK_THROWS_AS(mollify(lin, 0.005), input_error);
}

TEST_CASE("mollifier commutes with the sharp operator up to quadrature", "[field]") {
  const auto dom = GridDomain::build(DomainSpec::interval(0, 1), 0.004);
  const auto f = GridField::sample(dom, [](const Point& p) { return std::sin(9.0 * p[0]) + p[0] * p[0]; });
  Rng rng(77);
  int checked = 0;
  while (checked < 100) {
    const int K = 4 + static_cast<int>(rng.index(20));
    const auto st = dom.make_stencil(K);
    const double r = st.r_eff;
    const double delta = rng.uniform(2.5, 8.0) * dom.spacing();
    const auto centers = dom.interior_ids(r + delta + dom.spacing());
    if (centers.empty()) continue;
    const Point x = dom.point_of(centers[rng.index(centers.size())]);

    const auto smoothed = mollify(f, delta);
    const double lhs = sharp_average(smoothed, x, r);

    // sharp field of radius class K, then mollified at x
    const auto sweep = sharp_sweep(f, st);
    GridField msharp(dom, 1);
    for (std::size_t i = 0; i < sweep.centers.size(); ++i) msharp.set(sweep.centers[i], 0, sweep.value[i]);
    const auto rhs_field = mollify(msharp, delta);
    const auto xid = dom.id_at(static_cast<std::int64_t>(std::llround((x[0] - 0.0) / dom.spacing())));
    REQUIRE(xid >= 0);
    const double rhs = rhs_field.at(xid);

    CHECK(lhs <= rhs * (1 + 1e-9) + 1e-12);
    ++checked;
  }
}

TEST_CASE("ball quadrature consistency under refinement", "[field]") {
  // fixed ball, smooth integrand: error vs the independent closed form
  const double r = 0.2;
  std::vector<double> err_ball, err_sharp;
  for (double h : {0.008, 0.004, 0.002}) {
    const auto dom = GridDomain::build(DomainSpec::interval(-1, 1), h);
    const auto quad = GridField::sample(dom, [](const Point& p) { return p[0] * p[0]; });
    err_ball.push_back(std::abs(ball_average(quad, make_point(0.0), r) - r * r / 3.0));
    const auto lin = GridField::sample(dom, [](const Point& p) { return 0.7 * p[0]; });
    err_sharp.push_back(std::abs(sharp_average(lin, make_point(0.0), r) - 0.7 * r / 2.0));
  }
  // at least first order in h (rate measured over 3 refinements)
  CHECK(err_ball[2] <= err_ball[0] / 2.0 + 1e-12);
  CHECK(err_sharp[2] <= err_sharp[0] / 2.0 + 1e-14);
}

TEST_CASE("pointwise gradient estimate for smooth catalog entries", "[field]") {
  for (int dim : {1, 2}) {
    const double h = dim == 1 ? 0.002 : 0.01;
    const auto dom = dim == 1 ? GridDomain::build(DomainSpec::interval(0, 1), h)
                              : GridDomain::build(DomainSpec::disk({0, 0}, 1.0), h);
    const double cn = c_n(dim);
    Rng rng(dim);
    for (const auto& entry : smooth_catalog(dim)) {
      const auto f = sample_scalar(dom, entry);
      int checked = 0;
      while (checked < 40) {
        const auto id = static_cast<std::int32_t>(rng.index(dom.n_active()));
        const double dmax = dom.distance(id);
        if (dmax < 10 * h) continue;
        const double r = rng.uniform(5 * h, std::min(0.2, 0.9 * dmax));
        const Point x = dom.point_of(id);
        const double ms = sharp_average(f, x, r) / r;
        const Point g = entry.grad(x, dim);
        double gn = 0.0;
        for (int d = 0; d < dim; ++d) gn += g[d] * g[d];
        gn = std::sqrt(gn);
        const double slack = entry.hess_bound * r + 5.0 * (h / r) * (1.0 + gn);
        CHECK(std::abs(ms - cn * gn) <= slack);
        ++checked;
      }
    }
  }
}

TEST_CASE("catalog gradients have the advertised smoothness data", "[field]") {
  for (int dim : {1, 2}) {
    for (const auto& e : smooth_catalog(dim)) {
      CHECK(e.smoothness == Smoothness::smooth);
      CHECK(e.hess_bound >= 0.0);
      if (e.name != "linear") CHECK(e.hess_bound > 0.0);
    }
  }
  CHECK(catalog_abs_cusp().smoothness == Smoothness::lipschitz);
  CHECK(catalog_root_cusp().smoothness == Smoothness::rough);
  // the cusp derivative is not square integrable: alpha - 1 = -3/4
  const auto e = catalog_root_cusp(0.5, 0.25);
  CHECK(e.grad(make_point(0.5 + 0.01), 1)[0] == Approx(0.25 * std::pow(0.01, -0.75)));
}
