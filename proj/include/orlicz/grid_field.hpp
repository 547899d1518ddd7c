#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/grid_domain.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz {

/// Values attached to the active nodes of a GridDomain, stored densely over
/// the lattice (inactive entries are zero and are never read by ball sweeps,
/// which only touch balls contained in the domain). comps is 1 for scalars or
/// dim for gradient-type fields. The domain must outlive the field.
class GridField {
public:
  GridField(const GridDomain& dom, int comps = 1)
      : dom_(&dom), comps_(comps), dense_(comps, std::vector<double>(dom.lattice_size(), 0.0)) {}

  static GridField sample(const GridDomain& dom, const std::function<double(const Point&)>& fn) {
    GridField f(dom, 1);
    for (std::size_t i = 0; i < dom.n_active(); ++i) {
      const auto id = static_cast<std::int32_t>(i);
      f.set(id, 0, fn(dom.point_of(id)));
    }
    return f;
  }

  const GridDomain& domain() const { return *dom_; }
  int comps() const { return comps_; }

  double at(std::int32_t id, int c = 0) const { return dense_[c][dom_->lattice_of(id)]; }
  void set(std::int32_t id, int c, double v) { dense_[c][dom_->lattice_of(id)] = v; }

  const std::vector<double>& dense(int c = 0) const { return dense_[c]; }
  std::vector<double>& dense(int c = 0) { return dense_[c]; }

  /// Euclidean magnitude across components, as a scalar field.
  GridField magnitude() const {
    GridField out(*dom_, 1);
    for (std::size_t i = 0; i < dom_->n_active(); ++i) {
      const auto id = static_cast<std::int32_t>(i);
      double s = 0.0;
      for (int c = 0; c < comps_; ++c) s += at(id, c) * at(id, c);
      out.set(id, 0, std::sqrt(s));
    }
    return out;
  }

  GridField scaled(double factor) const {
    GridField out(*dom_, comps_);
    for (int c = 0; c < comps_; ++c)
      for (std::size_t j = 0; j < dense_[c].size(); ++j) out.dense_[c][j] = factor * dense_[c][j];
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dom_->n_active(); ++i)
      for (int c = 0; c < comps_; ++c) m = std::max(m, std::abs(at(static_cast<std::int32_t>(i), c)));
    return m;
  }

  void check_finite() const {
    for (std::size_t i = 0; i < dom_->n_active(); ++i)
      for (int c = 0; c < comps_; ++c)
        if (!std::isfinite(at(static_cast<std::int32_t>(i), c)))
          throw input_error("grid field has a non-finite value at an active node");
  }

private:
  const GridDomain* dom_;
  int comps_;
  std::vector<std::vector<double>> dense_;
};

namespace detail {

inline void require_ball(const GridField& f, const Point& center, double radius) {
  const GridDomain& dom = f.domain();
  if (f.comps() != 1) throw input_error("ball averages take scalar fields");
  if (!(radius > 0)) throw input_error("ball radius must be positive");
  if (!dom.inside(center) || dom.boundary_distance(center) <= radius)
    throw ball_error("ball is not contained in the domain");
}

}  // namespace detail

/// Mean of the field over the open ball B(center, radius); midpoint rule over
/// the cells whose centers lie in the ball. Requires B inside the domain.
inline double ball_average(const GridField& f, const Point& center, double radius) {
  detail::require_ball(f, center, radius);
  const GridDomain& dom = f.domain();
  auto ids = dom.nodes_in_ball(center, radius, /*closed=*/false);
  if (static_cast<int>(ids.size()) < dom.min_ball_nodes())
    throw ball_error("ball holds fewer nodes than the quadrature minimum");
  double s = 0.0;
  for (auto id : ids) s += f.at(id);
  return s / static_cast<double>(ids.size());
}

/// Mean absolute deviation from the ball mean: the sharp averaging operator
/// over B(center, radius), same quadrature as ball_average.
inline double sharp_average(const GridField& f, const Point& center, double radius) {
  detail::require_ball(f, center, radius);
  const GridDomain& dom = f.domain();
  auto ids = dom.nodes_in_ball(center, radius, /*closed=*/false);
  if (static_cast<int>(ids.size()) < dom.min_ball_nodes())
    throw ball_error("ball holds fewer nodes than the quadrature minimum");
  double s = 0.0;
  for (auto id : ids) s += f.at(id);
  const double mean = s / static_cast<double>(ids.size());
  double dev = 0.0;
  for (auto id : ids) dev += std::abs(f.at(id) - mean);
  return dev / static_cast<double>(ids.size());
}

/// Sharp averages of one radius class evaluated at every admissible center.
struct SharpSweep {
  std::vector<std::int32_t> centers;  // nodes with dist > r_eff
  std::vector<double> value;          // sharp average per center
};

/// Evaluates the sharp operator at all centers x with dist(x) > r_eff for a
/// fixed stencil; the data-parallel hot path of the whole laboratory.
inline SharpSweep sharp_sweep(const GridField& f, const BallStencil& st) {
  if (f.comps() != 1) throw input_error("sharp sweeps take scalar fields");
  const GridDomain& dom = f.domain();
  SharpSweep out;
  out.centers = dom.interior_ids(st.r_eff);
  out.value.assign(out.centers.size(), 0.0);
  const double* data = f.dense(0).data();
  const double count = static_cast<double>(st.count);
  detail::for_chunks(out.centers.size(), 1024, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::int64_t L = dom.lattice_of(out.centers[i]);
      double sum = 0.0;
      for (const auto& row : st.rows) {
        const double* p = data + L + row.base;
        for (int k = row.lo; k <= row.hi; ++k) sum += p[k];
      }
      // correctly rounded division: constant fields deviate exactly zero
      const double mean = sum / count;
      double dev = 0.0;
      for (const auto& row : st.rows) {
        const double* p = data + L + row.base;
        for (int k = row.lo; k <= row.hi; ++k) dev += std::abs(p[k] - mean);
      }
      out.value[i] = dev / count;
    }
  });
  return out;
}

/// Finite-difference gradient: central differences where both neighbors are
/// active, second-order one-sided stencils next to the boundary, first-order
/// as a last resort, zero at isolated nodes.
inline GridField gradient_fd(const GridField& f) {
  if (f.comps() != 1) throw input_error("gradient_fd takes scalar fields");
  const GridDomain& dom = f.domain();
  const int dim = dom.dim();
  GridField g(dom, dim);
  const double h = dom.spacing();
  for (std::size_t i = 0; i < dom.n_active(); ++i) {
    const auto id = static_cast<std::int32_t>(i);
    const std::int64_t L = dom.lattice_of(id);
    const Point x = dom.point_of(id);
    for (int d = 0; d < dim; ++d) {
      auto id_of = [&](int steps) -> std::int32_t {
        Point y = x;
        y[d] += steps * h;
        if (!dom.inside(y)) return -1;
        const std::int64_t lat = L + steps * dom.stride(d);
        if (lat < 0 || lat >= dom.lattice_size()) return -1;
        return dom.id_at(lat);
      };
      const std::int32_t ip = id_of(+1), im = id_of(-1);
      double val = 0.0;
      if (ip >= 0 && im >= 0) {
        val = (f.at(ip) - f.at(im)) / (2 * h);
      } else if (ip >= 0) {
        const std::int32_t ip2 = id_of(+2);
        val = (ip2 >= 0) ? (-3 * f.at(id) + 4 * f.at(ip) - f.at(ip2)) / (2 * h) : (f.at(ip) - f.at(id)) / h;
      } else if (im >= 0) {
        const std::int32_t im2 = id_of(-2);
        val = (im2 >= 0) ? (3 * f.at(id) - 4 * f.at(im) + f.at(im2)) / (2 * h) : (f.at(id) - f.at(im)) / h;
      }
      g.set(id, d, val);
    }
  }
  return g;
}

namespace detail {

inline double bump_kernel(double u) {
  if (u >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

}  // namespace detail

/// Discrete convolution with the rescaled radial bump of unit discrete mass,
/// defined on the shrunken set {dist > delta}. Input values must be valid on
/// all nodes the kernel touches from such centers. delta >= 2h.
inline GridField mollify(const GridField& f, double delta,
                         const std::function<double(double)>& kernel = detail::bump_kernel) {
  const GridDomain& dom = f.domain();
  if (f.comps() != 1) throw input_error("mollify takes scalar fields");
  const double h = dom.spacing();
  if (delta < 2 * h) throw input_error("mollifier width must be at least 2h");
  const int dim = dom.dim();
  const int M = static_cast<int>(std::ceil(delta / h)) - 1;

  // lattice offsets and renormalized weights
  std::vector<std::int64_t> offs;
  std::vector<double> wts;
  std::array<int, kMaxDim> off{};
  for (int d = 0; d < dim; ++d) off[d] = -M;
  double wsum = 0.0;
  for (;;) {
    double nrm2 = 0.0;
    for (int d = 0; d < dim; ++d) nrm2 += static_cast<double>(off[d]) * off[d];
    const double u = std::sqrt(nrm2) * h / delta;
    const double w = u < 1.0 ? kernel(u) : 0.0;
    if (w > 0.0) {
      std::int64_t lin = 0;
      for (int d = 0; d < dim; ++d) lin += static_cast<std::int64_t>(off[d]) * dom.stride(d);
      offs.push_back(lin);
      wts.push_back(w);
      wsum += w;
    }
    int d = dim - 1;
    for (; d >= 0; --d) {
      if (++off[d] <= M) break;
      off[d] = -M;
    }
    if (d < 0) break;
  }
  for (auto& w : wts) w /= wsum;

  GridField out(dom, 1);
  const double* data = f.dense(0).data();
  auto targets = dom.interior_ids(delta);
  detail::for_chunks(targets.size(), 2048, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::int64_t L = dom.lattice_of(targets[i]);
      double s = 0.0;
      for (std::size_t k = 0; k < offs.size(); ++k) s += wts[k] * data[L + offs[k]];
      out.dense(0)[L] = s;
    }
  });
  return out;
}

}  // namespace orlicz
