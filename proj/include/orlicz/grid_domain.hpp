#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "orlicz/domain_spec.hpp"
#include "orlicz/errors.hpp"

namespace orlicz {

/// Lattice ball stencil for the radius class K. Offsets are grouped into runs
/// that are contiguous along the last dimension, so averaging sweeps touch
/// memory linearly. r_eff is the calibrated quadrature radius of the class:
/// the radius at which the discrete sharp average is exact on affine fields
/// (direction-averaged), r_eff = (n+1)/n * h * mean |offset|.
struct BallStencil {
  int K = 0;
  double r_eff = 0.0;
  std::int64_t count = 0;
  struct Row {
    std::int64_t base;
    int lo, hi;
  };
  std::vector<Row> rows;
};

/// Uniform Cartesian discretization of an open set. Nodes are lattice points
/// anchored at the bounding-box corner; a node is active when it lies strictly
/// inside the domain. Each active node carries the exact distance to the
/// analytic boundary. Immutable after build; safe to share across threads.
class GridDomain {
public:
  static GridDomain build(DomainSpec spec, double h) {
    if (!(h > 0)) throw input_error("grid spacing must be positive");
    GridDomain g;
    g.spec_ = std::move(spec);
    g.h_ = h;
    g.dim_ = g.spec_.dim();
    Point lo, hi;
    g.spec_.bounding_box(lo, hi);
    g.origin_ = lo;
    std::int64_t total = 1;
    for (int d = 0; d < g.dim_; ++d) {
      g.npts_[d] = static_cast<std::int64_t>(std::ceil((hi[d] - lo[d]) / h - 1e-9)) + 1;
      total *= g.npts_[d];
    }
    for (int d = g.dim_; d < kMaxDim; ++d) g.npts_[d] = 1;
    g.stride_[g.dim_ - 1] = 1;
    for (int d = g.dim_ - 2; d >= 0; --d) g.stride_[d] = g.stride_[d + 1] * g.npts_[d + 1];

    g.node_id_.assign(total, -1);
    std::array<std::int64_t, kMaxDim> idx{};
    for (std::int64_t lin = 0; lin < total; ++lin) {
      Point p = g.point_at_index(idx);
      if (g.spec_.inside(p)) {
        const double d = g.spec_.boundary_distance(p);
        if (d > 0) {
          g.node_id_[lin] = static_cast<std::int32_t>(g.lattice_of_.size());
          g.lattice_of_.push_back(lin);
          g.dist_.push_back(d);
          g.max_dist_ = std::max(g.max_dist_, d);
        }
      }
      for (int d = g.dim_ - 1; d >= 0; --d) {
        if (++idx[d] < g.npts_[d]) break;
        idx[d] = 0;
      }
    }
    if (g.lattice_of_.empty()) throw input_error("domain has no active grid nodes at this spacing");
    Point span{};
    double diag = 0.0;
    for (int d = 0; d < g.dim_; ++d) {
      span[d] = hi[d] - lo[d];
      diag += span[d] * span[d];
    }
    g.diameter_ = std::sqrt(diag);
    return g;
  }

  int dim() const { return dim_; }
  double spacing() const { return h_; }
  double cell_measure() const { return std::pow(h_, dim_); }
  std::size_t n_active() const { return lattice_of_.size(); }
  std::int64_t lattice_size() const { return static_cast<std::int64_t>(node_id_.size()); }
  const DomainSpec& spec() const { return spec_; }
  double max_distance() const { return max_dist_; }
  double diameter() const { return diameter_; }

  std::int64_t lattice_of(std::int32_t id) const { return lattice_of_[id]; }
  std::int32_t id_at(std::int64_t lattice) const { return node_id_[lattice]; }
  double distance(std::int32_t id) const { return dist_[id]; }
  std::int64_t stride(int d) const { return stride_[d]; }
  std::int64_t npts(int d) const { return npts_[d]; }

  Point point_of(std::int32_t id) const {
    std::int64_t rem = lattice_of_[id];
    Point p = origin_;
    for (int d = 0; d < dim_; ++d) {
      p[d] = origin_[d] + static_cast<double>(rem / stride_[d]) * h_;
      rem %= stride_[d];
    }
    return p;
  }

  bool inside(const Point& p) const { return spec_.inside(p); }
  double boundary_distance(const Point& p) const { return spec_.boundary_distance(p); }

  /// Nodes of the interior set {x : dist(x, boundary) > r}. May be empty.
  std::vector<std::int32_t> interior_ids(double r) const {
    if (r < 0) throw input_error("interior set requires r >= 0");
    std::vector<std::int32_t> ids;
    for (std::size_t i = 0; i < dist_.size(); ++i)
      if (dist_[i] > r) ids.push_back(static_cast<std::int32_t>(i));
    return ids;
  }

  /// Active nodes within the ball around an arbitrary center. closed=true
  /// uses |y-c| <= r (envelope scans), closed=false uses strict < (averages).
  std::vector<std::int32_t> nodes_in_ball(const Point& c, double r, bool closed) const {
    std::vector<std::int32_t> ids;
    std::array<std::int64_t, kMaxDim> lo{}, hi{}, idx{};
    for (int d = 0; d < dim_; ++d) {
      lo[d] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil((c[d] - r - origin_[d]) / h_ - 1e-12)));
      hi[d] = std::min<std::int64_t>(npts_[d] - 1,
                                     static_cast<std::int64_t>(std::floor((c[d] + r - origin_[d]) / h_ + 1e-12)));
      if (lo[d] > hi[d]) return ids;
      idx[d] = lo[d];
    }
    const double r2 = r * r;
    for (;;) {
      double s = 0.0;
      std::int64_t lin = 0;
      for (int d = 0; d < dim_; ++d) {
        const double dd = origin_[d] + static_cast<double>(idx[d]) * h_ - c[d];
        s += dd * dd;
        lin += idx[d] * stride_[d];
      }
      const bool in = closed ? (s <= r2 * (1 + 1e-12)) : (s < r2 * (1 - 1e-15));
      if (in && node_id_[lin] >= 0) ids.push_back(node_id_[lin]);
      int d = dim_ - 1;
      for (; d >= 0; --d) {
        if (++idx[d] <= hi[d]) break;
        idx[d] = lo[d];
      }
      if (d < 0) break;
    }
    return ids;
  }

  int min_ball_nodes() const { return dim_ == 1 ? 8 : 16; }

  /// Smallest stencil class whose node count meets min_ball_nodes.
  int min_stencil_class() const {
    for (int K = 1;; ++K)
      if (stencil_count(K) >= min_ball_nodes()) return K;
  }

  std::int64_t stencil_count(int K) const {
    const std::int64_t cap = static_cast<std::int64_t>(K) * K + K;
    std::int64_t count = 0;
    enum_prefixes(K, [&](std::int64_t, std::int64_t prefix_sq) {
      const std::int64_t w = isqrt(cap - prefix_sq);
      count += 2 * w + 1;
    });
    return count;
  }

  /// Builds the lattice ball of class K: offsets v with |v|^2 <= K^2 + K,
  /// i.e. |v| h < (K + 1/2) h.
  BallStencil make_stencil(int K) const {
    BallStencil s;
    s.K = K;
    const std::int64_t cap = static_cast<std::int64_t>(K) * K + K;
    double sum_norm = 0.0;
    enum_prefixes(K, [&](std::int64_t base, std::int64_t prefix_sq) {
      const int w = static_cast<int>(isqrt(cap - prefix_sq));
      s.rows.push_back({base, -w, w});
      s.count += 2 * w + 1;
      for (int k = 0; k <= w; ++k) {
        const double nrm = std::sqrt(static_cast<double>(prefix_sq + static_cast<std::int64_t>(k) * k));
        sum_norm += (k == 0) ? nrm : 2.0 * nrm;
      }
    });
    const double n = static_cast<double>(dim_);
    s.r_eff = (n + 1.0) / n * h_ * sum_norm / static_cast<double>(s.count);
    return s;
  }

private:
  Point point_at_index(const std::array<std::int64_t, kMaxDim>& idx) const {
    Point p{};
    for (int d = 0; d < dim_; ++d) p[d] = origin_[d] + static_cast<double>(idx[d]) * h_;
    return p;
  }

  static std::int64_t isqrt(std::int64_t v) {
    if (v < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
  }

  /// Enumerates offsets over all dimensions except the last; reports the
  /// lattice base offset and the squared prefix norm.
  template <class Fn>
  void enum_prefixes(int K, Fn&& fn) const {
    if (dim_ == 1) {
      fn(0, 0);
      return;
    }
    std::array<int, kMaxDim> off{};
    for (int d = 0; d < dim_ - 1; ++d) off[d] = -K;
    for (;;) {
      std::int64_t prefix_sq = 0, base = 0;
      for (int d = 0; d < dim_ - 1; ++d) {
        prefix_sq += static_cast<std::int64_t>(off[d]) * off[d];
        base += static_cast<std::int64_t>(off[d]) * stride_[d];
      }
      if (prefix_sq <= static_cast<std::int64_t>(K) * K + K) fn(base, prefix_sq);
      int d = dim_ - 2;
      for (; d >= 0; --d) {
        if (++off[d] <= K) break;
        off[d] = -K;
      }
      if (d < 0) break;
    }
  }

  DomainSpec spec_;
  int dim_ = 1;
  double h_ = 0;
  Point origin_{};
  std::array<std::int64_t, kMaxDim> npts_{};
  std::array<std::int64_t, kMaxDim> stride_{};
  std::vector<std::int32_t> node_id_;     // lattice -> active id, -1 if inactive
  std::vector<std::int64_t> lattice_of_;  // active id -> lattice index
  std::vector<double> dist_;              // active id -> exact boundary distance
  double max_dist_ = 0.0;
  double diameter_ = 0.0;
};

}  // namespace orlicz
