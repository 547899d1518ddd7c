#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/grid_field.hpp"

namespace orlicz {

enum class Smoothness { smooth, lipschitz, rough };

inline std::string to_string(Smoothness s) {
  switch (s) {
    case Smoothness::smooth: return "smooth";
    case Smoothness::lipschitz: return "lipschitz";
    case Smoothness::rough: return "rough";
  }
  return "?";
}

/// Test function with a closed-form gradient. hess_bound is an upper bound on
/// the operator norm of the Hessian (0 where that makes no sense); for rough
/// entries the gradient formula holds away from the singular set.
struct CatalogEntry {
  std::string name;
  Smoothness smoothness = Smoothness::smooth;
  double hess_bound = 0.0;
  std::function<double(const Point&, int)> value;
  std::function<Point(const Point&, int)> grad;
};

inline GridField sample_scalar(const GridDomain& dom, const CatalogEntry& e) {
  return GridField::sample(dom, [&](const Point& p) { return e.value(p, dom.dim()); });
}

inline GridField sample_gradient(const GridDomain& dom, const CatalogEntry& e) {
  GridField g(dom, dom.dim());
  for (std::size_t i = 0; i < dom.n_active(); ++i) {
    const auto id = static_cast<std::int32_t>(i);
    const Point gv = e.grad(dom.point_of(id), dom.dim());
    for (int d = 0; d < dom.dim(); ++d) g.set(id, d, gv[d]);
  }
  return g;
}

inline CatalogEntry catalog_linear(std::vector<double> slope, double intercept) {
  CatalogEntry e;
  e.name = "linear";
  e.smoothness = Smoothness::smooth;
  e.hess_bound = 0.0;
  e.value = [slope, intercept](const Point& p, int dim) {
    double s = intercept;
    for (int d = 0; d < dim && d < static_cast<int>(slope.size()); ++d) s += slope[d] * p[d];
    return s;
  };
  e.grad = [slope](const Point&, int dim) {
    Point g{};
    for (int d = 0; d < dim && d < static_cast<int>(slope.size()); ++d) g[d] = slope[d];
    return g;
  };
  return e;
}

inline CatalogEntry catalog_sin_pi() {
  CatalogEntry e;
  e.name = "sin_pi";
  e.hess_bound = M_PI * M_PI;
  e.value = [](const Point& p, int) { return std::sin(M_PI * p[0]); };
  e.grad = [](const Point& p, int) {
    Point g{};
    g[0] = M_PI * std::cos(M_PI * p[0]);
    return g;
  };
  return e;
}

inline CatalogEntry catalog_quadratic() {
  CatalogEntry e;
  e.name = "quadratic";
  e.hess_bound = 2.0;
  e.value = [](const Point& p, int) { return p[0] * p[0]; };
  e.grad = [](const Point& p, int) {
    Point g{};
    g[0] = 2.0 * p[0];
    return g;
  };
  return e;
}

inline CatalogEntry catalog_sinprod() {
  CatalogEntry e;
  e.name = "sinprod";
  e.hess_bound = 2.0 * M_PI * M_PI;
  e.value = [](const Point& p, int) { return std::sin(M_PI * p[0]) * std::cos(M_PI * p[1]); };
  e.grad = [](const Point& p, int) {
    Point g{};
    g[0] = M_PI * std::cos(M_PI * p[0]) * std::cos(M_PI * p[1]);
    g[1] = -M_PI * std::sin(M_PI * p[0]) * std::sin(M_PI * p[1]);
    return g;
  };
  return e;
}

inline CatalogEntry catalog_gauss(double width = 0.5) {
  CatalogEntry e;
  e.name = "gauss";
  const double k = 1.0 / (2.0 * width * width);
  e.hess_bound = 2.0 * k * 1.2;  // max of (2k + 4k^2 r^2) exp(-k r^2) is (2k + 2k) e^{-1/2} < 2.43 k
  e.value = [k](const Point& p, int dim) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += p[d] * p[d];
    return std::exp(-k * r2);
  };
  e.grad = [k](const Point& p, int dim) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += p[d] * p[d];
    const double v = std::exp(-k * r2);
    Point g{};
    for (int d = 0; d < dim; ++d) g[d] = -2.0 * k * p[d] * v;
    return g;
  };
  return e;
}

inline CatalogEntry catalog_poly_well() {
  CatalogEntry e;
  e.name = "poly_well";
  e.hess_bound = 12.0;  // on |x| <= 1
  e.value = [](const Point& p, int dim) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += p[d] * p[d];
    const double w = 1.0 - r2;
    return w * w;
  };
  e.grad = [](const Point& p, int dim) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += p[d] * p[d];
    Point g{};
    for (int d = 0; d < dim; ++d) g[d] = -4.0 * (1.0 - r2) * p[d];
    return g;
  };
  return e;
}

inline CatalogEntry catalog_abs_cusp(double center = 0.5) {
  CatalogEntry e;
  e.name = "abs_cusp";
  e.smoothness = Smoothness::lipschitz;
  e.value = [center](const Point& p, int) { return std::abs(p[0] - center); };
  e.grad = [center](const Point& p, int) {
    Point g{};
    g[0] = p[0] > center ? 1.0 : (p[0] < center ? -1.0 : 0.0);
    return g;
  };
  return e;
}

/// |x - c|^alpha; for alpha in (0,1) the derivative blows up at the cusp and
/// for alpha <= 1/2 it fails to be square integrable.
inline CatalogEntry catalog_root_cusp(double center = 0.5, double alpha = 0.25) {
  CatalogEntry e;
  e.name = "root_cusp";
  e.smoothness = Smoothness::rough;
  e.value = [center, alpha](const Point& p, int) { return std::pow(std::abs(p[0] - center), alpha); };
  e.grad = [center, alpha](const Point& p, int) {
    Point g{};
    const double u = p[0] - center;
    g[0] = u == 0.0 ? 0.0 : alpha * std::pow(std::abs(u), alpha - 1.0) * (u > 0 ? 1.0 : -1.0);
    return g;
  };
  return e;
}

inline CatalogEntry catalog_entry_from_json(const json& j) {
  const std::string name = j.is_string() ? j.get<std::string>() : j.at("name").get<std::string>();
  auto opt = [&j](const char* key, double dflt) {
    return (!j.is_string() && j.contains(key)) ? j.at(key).get<double>() : dflt;
  };
  if (name == "linear") {
    std::vector<double> slope{1.0};
    if (!j.is_string() && j.contains("slope")) slope = j.at("slope").get<std::vector<double>>();
    return catalog_linear(slope, opt("intercept", 0.0));
  }
  if (name == "sin_pi") return catalog_sin_pi();
  if (name == "quadratic") return catalog_quadratic();
  if (name == "sinprod") return catalog_sinprod();
  if (name == "gauss") return catalog_gauss(opt("width", 0.5));
  if (name == "poly_well") return catalog_poly_well();
  if (name == "abs_cusp") return catalog_abs_cusp(opt("center", 0.5));
  if (name == "root_cusp") return catalog_root_cusp(opt("center", 0.5), opt("alpha", 0.25));
  throw input_error("unknown catalog function '" + name + "'");
}

/// The smooth entries used by property sweeps, per dimension.
inline std::vector<CatalogEntry> smooth_catalog(int dim) {
  if (dim == 1) return {catalog_linear({1.2}, 0.3), catalog_sin_pi(), catalog_quadratic(), catalog_gauss()};
  return {catalog_linear({0.8, -0.5}, 0.2), catalog_sinprod(), catalog_gauss(), catalog_poly_well()};
}

}  // namespace orlicz
