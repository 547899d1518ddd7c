#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "orlicz/coefficient_field.hpp"
#include "orlicz/domain_spec.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/ext_value.hpp"
#include "orlicz/grid_domain.hpp"

namespace orlicz {

/// pow for t >= 0 with cheap paths for the exponents the built-in families
/// actually use in hot loops.
inline double fast_pow(double t, double p) {
  if (p == 2.0) return t * t;
  if (p == 1.0) return t;
  if (p == 3.0) return t * t * t;
  if (p == 0.5) return std::sqrt(t);
  if (p == 1.5) return t * std::sqrt(t);
  if (p == 2.5) return t * t * std::sqrt(t);
  if (t == 0.0) return p == 0.0 ? 1.0 : 0.0;
  return std::pow(t, p);
}

struct PhiModel;

struct PowerPhi {
  double p;
};

struct VariableExponentPhi {
  CoefficientField p;
};

struct DoublePhasePhi {
  double p, q;
  CoefficientField a;
};

struct LogPerturbedPhi {
  CoefficientField p;
};

/// x-independent sampled Phi-function. Interpolation is linear in log-log
/// coordinates, so pure power laws are represented exactly; outside the table
/// the two boundary power-law slopes extrapolate the tails. Values may be
/// +inf from some node onward.
struct TablePhi {
  std::vector<double> t, v;

  void prepare() {
    if (t.size() < 2 || t.size() != v.size()) throw input_error("table needs matching t/v arrays, size >= 2");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
      if (!(t[i] > 0) || !(t[i + 1] > t[i])) throw input_error("table t-grid must be positive and strictly increasing");
    first_inf = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0) throw input_error("table values must be nonnegative");
      if (std::isinf(v[i])) {
        first_inf = i;
        break;
      }
      if (i > 0 && v[i] < v[i - 1]) throw input_error("table values must be increasing");
    }
    if (first_inf < 2) throw input_error("table needs at least two finite values");
    const std::size_t last = first_inf - 1;
    auto slope = [&](std::size_t i, std::size_t j) {
      if (v[i] <= 0 || v[j] <= 0) return 1.0;
      return std::log(v[j] / v[i]) / std::log(t[j] / t[i]);
    };
    tail_lo = slope(0, 1);
    tail_hi = slope(last - 1, last);
  }

  double eval(double x) const {
    if (x <= 0) return 0.0;
    if (x < t.front()) return v.front() <= 0 ? 0.0 : v.front() * std::pow(x / t.front(), tail_lo);
    const std::size_t last = first_inf - 1;
    if (x > t[last]) {
      if (first_inf < v.size()) return kInf;  // beyond the last finite node the table jumps
      return v[last] <= 0 ? 0.0 : v[last] * std::pow(x / t[last], tail_hi);
    }
    const auto it = std::lower_bound(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(last) + 1, x);
    std::size_t j = static_cast<std::size_t>(it - t.begin());
    if (t[j] == x) return v[j];
    const std::size_t i = j - 1;
    if (v[i] <= 0.0 || v[j] <= 0.0) {  // linear near a zero value
      const double w = (x - t[i]) / (t[j] - t[i]);
      return v[i] + w * (v[j] - v[i]);
    }
    const double w = std::log(x / t[i]) / std::log(t[j] / t[i]);
    return std::exp(std::log(v[i]) + w * std::log(v[j] / v[i]));
  }

  std::size_t first_inf = 0;
  double tail_lo = 1.0, tail_hi = 1.0;
};

/// phi(t) = 0 on [0, threshold), +inf on [threshold, inf).
struct StepIndicatorPhi {
  double threshold;
};

/// psi(x, t) = integral_0^t phi(x, s)/s ds, evaluated by trapezoidal
/// quadrature on a fixed t-grid. The convex regularization of a weak
/// Phi-function; satisfies psi(t) <= c phi(t) and phi(t) <= c psi(2t).
struct ConvexifiedPhi {
  std::shared_ptr<const PhiModel> base;
  std::vector<double> grid;
};

using PhiFamily =
    std::variant<PowerPhi, VariableExponentPhi, DoublePhasePhi, LogPerturbedPhi, TablePhi, StepIndicatorPhi, ConvexifiedPhi>;

/// A generalized weak Phi-function phi(x, t): a named family plus spatial
/// coefficient fields. Immutable once built; share freely across threads.
struct PhiModel {
  PhiFamily family;
  /// Monotonicity constant c >= 1 of t -> phi(x,t)/t, uniform in x.
  double weak_constant = 1.0;
  /// Equivalence band used when convergence targets only hold up to a
  /// constant (weak, non-convex models); 1 means tight targets.
  double equiv_band = 1.0;

  static PhiModel power(double p) { return PhiModel{PowerPhi{p}, 1.0, 1.0}; }
  static PhiModel variable_exponent(CoefficientField p) { return PhiModel{VariableExponentPhi{std::move(p)}, 1.0, 1.0}; }
  static PhiModel double_phase(double p, double q, CoefficientField a) {
    return PhiModel{DoublePhasePhi{p, q, std::move(a)}, 1.0, 1.0};
  }
  static PhiModel log_perturbed(CoefficientField p) { return PhiModel{LogPerturbedPhi{std::move(p)}, 1.0, 1.0}; }
  static PhiModel step_indicator(double threshold) { return PhiModel{StepIndicatorPhi{threshold}, 1.0, 1.0}; }
  static PhiModel table(std::vector<double> t, std::vector<double> v);

  static PhiModel from_json(const json& j);
  json to_json() const;

  bool x_independent() const;
};

// ---------------------------------------------------------------------------
// evaluation

namespace detail {

inline double convexified_eval(const ConvexifiedPhi& c, const Point& x, double t, int dim);

}  // namespace detail

/// phi(x, t). Coefficient expressions are globally defined closed forms; use
/// the domain-checked overload when evaluation must stay inside Omega.
inline double eval_raw(const PhiModel& m, const Point& x, double t, int dim = 1) {
  if (t < 0 || std::isnan(t)) throw input_error("phi argument must be nonnegative");
  if (t == 0.0) return 0.0;
  return std::visit(
      [&](const auto& fam) -> double {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, PowerPhi>) {
          return fast_pow(t, fam.p);
        } else if constexpr (std::is_same_v<F, VariableExponentPhi>) {
          return fast_pow(t, fam.p(x, dim));
        } else if constexpr (std::is_same_v<F, DoublePhasePhi>) {
          return fast_pow(t, fam.p) + fam.a(x, dim) * fast_pow(t, fam.q);
        } else if constexpr (std::is_same_v<F, LogPerturbedPhi>) {
          return fast_pow(t, fam.p(x, dim)) * std::log(std::exp(1.0) + t);
        } else if constexpr (std::is_same_v<F, TablePhi>) {
          return fam.eval(t);
        } else if constexpr (std::is_same_v<F, StepIndicatorPhi>) {
          return t >= fam.threshold ? kInf : 0.0;
        } else {
          return detail::convexified_eval(fam, x, t, dim);
        }
      },
      m.family);
}

inline ExtNonneg eval(const PhiModel& m, const Point& x, double t, int dim = 1) {
  return ExtNonneg(eval_raw(m, x, t, dim));
}

/// Domain-checked evaluation: x must lie in Omega.
inline ExtNonneg eval(const PhiModel& m, const GridDomain& dom, const Point& x, double t) {
  if (!m.x_independent() && !dom.inside(x)) throw domain_error("evaluation point lies outside the domain");
  return eval(m, x, t, dom.dim());
}

namespace detail {

inline double convexified_eval(const ConvexifiedPhi& c, const Point& x, double t, int dim) {
  const auto& g = c.grid;
  auto integrand = [&](double s) { return eval_raw(*c.base, x, s, dim) / s; };
  double acc = 0.0, prev_s = 0.0, prev_g = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = std::min(g[i], t);
    const double gs = integrand(s);
    acc += 0.5 * (prev_g + gs) * (s - prev_s);
    if (g[i] >= t || std::isinf(acc)) return acc;
    prev_s = s;
    prev_g = gs;
  }
  // beyond the grid: continue with the last geometric step ratio
  const double ratio = std::max(1.0000001, g.back() / g[g.size() - 2]);
  while (prev_s < t) {
    const double s = std::min(prev_s * ratio, t);
    const double gs = integrand(s);
    acc += 0.5 * (prev_g + gs) * (s - prev_s);
    prev_s = s;
    prev_g = gs;
    if (std::isinf(acc)) break;
  }
  return acc;
}

}  // namespace detail

inline bool PhiModel::x_independent() const {
  return std::visit(
      [](const auto& fam) -> bool {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, PowerPhi> || std::is_same_v<F, TablePhi> || std::is_same_v<F, StepIndicatorPhi>)
          return true;
        else if constexpr (std::is_same_v<F, VariableExponentPhi> || std::is_same_v<F, LogPerturbedPhi>)
          return fam.p.is_constant();
        else if constexpr (std::is_same_v<F, DoublePhasePhi>)
          return fam.a.is_constant();
        else
          return fam.base->x_independent();
      },
      family);
}

// ---------------------------------------------------------------------------
// generalized inverse

/// Left-continuous generalized inverse inf{ t >= 0 : phi(x,t) >= s }.
/// Closed form for Power / VariableExponent / StepIndicator; monotone
/// bisection otherwise: bracket [0, 1] with the upper end doubled until
/// phi(x, hi) >= s, giving up (returns +inf) past 1e12.
inline double inverse(const PhiModel& m, const Point& x, double s, int dim = 1) {
  if (s < 0 || std::isnan(s)) throw domain_error("inverse requires s >= 0");
  if (s == 0.0) return 0.0;
  if (const auto* pw = std::get_if<PowerPhi>(&m.family)) return std::isinf(s) ? kInf : std::pow(s, 1.0 / pw->p);
  if (const auto* ve = std::get_if<VariableExponentPhi>(&m.family))
    return std::isinf(s) ? kInf : std::pow(s, 1.0 / ve->p(x, dim));
  if (const auto* st = std::get_if<StepIndicatorPhi>(&m.family)) return st->threshold;

  double hi = 1.0;
  while (eval_raw(m, x, hi, dim) < s) {
    hi *= 2.0;
    if (hi > 1e12) return kInf;
  }
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval_raw(m, x, mid, dim) >= s)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// ball envelopes

namespace detail {

template <class EvalFn>
double sup_over_ids(const GridDomain& dom, const std::vector<std::int32_t>& ids, EvalFn&& f) {
  double best = -kInf;
  for (auto id : ids) best = std::max(best, f(id));
  return best;
}

template <class EvalFn>
double inf_over_ids(const GridDomain& dom, const std::vector<std::int32_t>& ids, EvalFn&& f) {
  double best = kInf;
  for (auto id : ids) best = std::min(best, f(id));
  return best;
}

}  // namespace detail

inline std::vector<std::int32_t> envelope_ball_nodes(const GridDomain& dom, const Point& center, double radius) {
  if (!(radius > 0)) throw input_error("envelope ball needs radius > 0");
  auto ids = dom.nodes_in_ball(center, radius, /*closed=*/true);
  if (ids.empty()) throw ball_error("ball does not meet any active node");
  return ids;
}

/// sup_{x in Omega cap B} phi(x, t) over active nodes (closed ball).
inline ExtNonneg phi_sup_ball(const PhiModel& m, const GridDomain& dom, const Point& center, double radius, double t) {
  auto ids = envelope_ball_nodes(dom, center, radius);
  return ExtNonneg(
      detail::sup_over_ids(dom, ids, [&](std::int32_t id) { return eval_raw(m, dom.point_of(id), t, dom.dim()); }));
}

/// inf_{x in Omega cap B} phi(x, t) over active nodes (closed ball).
inline ExtNonneg phi_inf_ball(const PhiModel& m, const GridDomain& dom, const Point& center, double radius, double t) {
  auto ids = envelope_ball_nodes(dom, center, radius);
  return ExtNonneg(
      detail::inf_over_ids(dom, ids, [&](std::int32_t id) { return eval_raw(m, dom.point_of(id), t, dom.dim()); }));
}

/// Generalized inverse of t -> inf_{nodes} phi(x,t); the node set is fixed.
inline double envelope_inf_inverse(const PhiModel& m, const GridDomain& dom, const std::vector<std::int32_t>& ids,
                                   double s) {
  if (s <= 0) return 0.0;
  auto env = [&](double t) {
    return detail::inf_over_ids(dom, ids, [&](std::int32_t id) { return eval_raw(m, dom.point_of(id), t, dom.dim()); });
  };
  double hi = 1.0;
  while (env(hi) < s) {
    hi *= 2.0;
    if (hi > 1e12) return kInf;
  }
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (env(mid) >= s)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// convex regularization

inline PhiModel convexify(const PhiModel& m, std::vector<double> t_grid) {
  if (t_grid.size() < 8) throw input_error("convexify t-grid too short");
  if (t_grid.front() > 1e-3) throw input_error("convexify t-grid must start near 0");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] > 0) || !(t_grid[i + 1] > t_grid[i]))
      throw input_error("convexify t-grid must be positive and strictly increasing");
  PhiModel out;
  out.family = ConvexifiedPhi{std::make_shared<PhiModel>(m), std::move(t_grid)};
  out.weak_constant = 1.0;  // the regularization is convex
  out.equiv_band = m.weak_constant;
  return out;
}

/// Geometric default grid for table-backed constructions.
inline std::vector<double> geometric_grid(double lo = 1e-6, double hi = 1e6, std::size_t n = 4096) {
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  return g;
}

inline PhiModel PhiModel::table(std::vector<double> t, std::vector<double> v) {
  TablePhi tab{std::move(t), std::move(v)};
  tab.prepare();
  // monotonicity constant of phi(t)/t measured on the table nodes
  double c = 1.0;
  {
    const std::size_t n = tab.first_inf;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = tab.v[i] / tab.t[i];
    double run_min = kInf;
    for (std::size_t i = n; i-- > 0;) {
      run_min = std::min(run_min, g[i]);
      if (g[i] > 0 && run_min > 0) c = std::max(c, g[i] / run_min);
    }
  }
  PhiModel m;
  m.family = std::move(tab);
  m.weak_constant = c;
  m.equiv_band = c;
  return m;
}

/// Samples an x-independent model (or any callable) into a TablePhi model.
template <class Fn>
PhiModel make_table_model(Fn&& phi_of_t, double lo = 1e-6, double hi = 1e6, std::size_t n = 4096) {
  auto t = geometric_grid(lo, hi, n);
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = phi_of_t(t[i]);
  return PhiModel::table(std::move(t), std::move(v));
}

// ---------------------------------------------------------------------------
// equivalence  g ~ h  iff  h(t/L) <= g(t) <= h(Lt)

struct EquivalenceResult {
  bool equivalent = false;
  double L = 0.0;  // smallest grid constant when equivalent
};

inline EquivalenceResult equivalence_constant(const PhiModel& a, const PhiModel& b, const std::vector<Point>& xs,
                                              const std::vector<double>& ts, int dim = 1, double L_max = 1e3) {
  auto holds_at = [&](double L) {
    for (const auto& x : xs) {
      for (double t : ts) {
        const double ga = eval_raw(a, x, t, dim);
        const double lo = eval_raw(b, x, t / L, dim);
        const double hi = eval_raw(b, x, L * t, dim);
        if (!(lo <= ga * (1 + 1e-9) + 1e-300)) return false;
        if (!(ga <= hi * (1 + 1e-9) + 1e-300)) return false;
      }
    }
    return true;
  };
  // geometric grid, 64 points per decade
  for (int k = 0;; ++k) {
    const double L = std::pow(10.0, k / 64.0);
    if (L > L_max * (1 + 1e-12)) break;
    if (holds_at(L)) return {true, L};
  }
  return {false, 0.0};
}

// ---------------------------------------------------------------------------
// weak Phi-function validation

/// Checks the defining properties on a sampled (x, t) grid and returns the
/// measured monotonicity constant of phi(x,t)/t. Throws input_error on a
/// violation witness.
inline double validate_weak_phi(const PhiModel& m, const GridDomain* dom, std::size_t max_x_samples = 48) {
  std::vector<Point> xs;
  if (dom && !m.x_independent()) {
    const std::size_t n = dom->n_active();
    const std::size_t step = std::max<std::size_t>(1, n / max_x_samples);
    for (std::size_t i = 0; i < n; i += step) xs.push_back(dom->point_of(static_cast<std::int32_t>(i)));
  } else {
    xs.push_back(make_point(0.0));
  }
  const int dim = dom ? dom->dim() : 1;
  auto ts = geometric_grid(1e-6, 1e6, 96);
  double c = 1.0;
  for (const auto& x : xs) {
    if (eval_raw(m, x, 0.0, dim) != 0.0) throw input_error("phi(x, 0) must be 0");
    double prev = 0.0;
    std::vector<double> g(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double val = eval_raw(m, x, ts[i], dim);
      if (val < prev * (1 - 1e-12)) throw input_error("phi(x, .) must be increasing");
      prev = std::max(prev, val);
      g[i] = val / ts[i];
    }
    if (!(prev > 1.0)) throw input_error("phi(x, t) must tend to infinity");
    double run_min = kInf;
    for (std::size_t i = ts.size(); i-- > 0;) {
      if (std::isinf(g[i])) continue;
      run_min = std::min(run_min, g[i]);
      if (g[i] > 0 && run_min > 0 && std::isfinite(g[i])) c = std::max(c, g[i] / run_min);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// fast per-node evaluation

/// PhiModel bound to a grid: spatial coefficients sampled once per active
/// node, evaluation by node id. Used by every modular-type sum.
class NodePhi {
public:
  NodePhi(const PhiModel& m, const GridDomain& dom) : model_(&m), dom_(&dom) {
    std::visit(
        [&](const auto& fam) {
          using F = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<F, PowerPhi>) {
            tag_ = Tag::power;
            p_ = fam.p;
          } else if constexpr (std::is_same_v<F, VariableExponentPhi>) {
            tag_ = Tag::varexp;
            sample(fam.p);
          } else if constexpr (std::is_same_v<F, DoublePhasePhi>) {
            tag_ = Tag::double_phase;
            p_ = fam.p;
            q_ = fam.q;
            sample(fam.a);
          } else if constexpr (std::is_same_v<F, LogPerturbedPhi>) {
            tag_ = Tag::log_perturbed;
            sample(fam.p);
          } else {
            tag_ = Tag::generic;
          }
        },
        m.family);
  }

  double operator()(std::int32_t id, double t) const {
    if (t <= 0.0) return 0.0;
    switch (tag_) {
      case Tag::power:
        return fast_pow(t, p_);
      case Tag::varexp:
        return fast_pow(t, coef_[id]);
      case Tag::double_phase:
        return fast_pow(t, p_) + coef_[id] * fast_pow(t, q_);
      case Tag::log_perturbed:
        return fast_pow(t, coef_[id]) * std::log(std::exp(1.0) + t);
      case Tag::generic:
        return eval_raw(*model_, dom_->point_of(id), t, dom_->dim());
    }
    return 0.0;
  }

  const PhiModel& model() const { return *model_; }
  const GridDomain& domain() const { return *dom_; }

private:
  enum class Tag { power, varexp, double_phase, log_perturbed, generic };

  void sample(const CoefficientField& f) {
    coef_.resize(dom_->n_active());
    for (std::size_t i = 0; i < coef_.size(); ++i)
      coef_[i] = f(dom_->point_of(static_cast<std::int32_t>(i)), dom_->dim());
  }

  const PhiModel* model_;
  const GridDomain* dom_;
  Tag tag_ = Tag::generic;
  double p_ = 2.0, q_ = 2.0;
  std::vector<double> coef_;
};

// ---------------------------------------------------------------------------
// JSON

inline PhiModel PhiModel::from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  PhiModel m;
  if (family == "power") {
    m = power(j.at("p").get<double>());
  } else if (family == "variable_exponent") {
    m = variable_exponent(CoefficientField::from_json(j.at("p")));
  } else if (family == "double_phase") {
    m = double_phase(j.at("p").get<double>(), j.at("q").get<double>(), CoefficientField::from_json(j.at("a")));
  } else if (family == "log_perturbed") {
    m = log_perturbed(CoefficientField::from_json(j.at("p")));
  } else if (family == "orlicz_table") {
    m = table(j.at("t").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
  } else if (family == "step_indicator") {
    m = step_indicator(j.at("threshold").get<double>());
  } else {
    throw input_error("unknown phi family '" + family + "'");
  }
  if (j.contains("weak_constant")) m.weak_constant = j.at("weak_constant").get<double>();
  if (j.contains("equiv_band")) m.equiv_band = j.at("equiv_band").get<double>();
  if (m.weak_constant < 1.0 || m.equiv_band < 1.0) throw input_error("constants must be >= 1");
  return m;
}

inline json PhiModel::to_json() const {
  json j = std::visit(
      [](const auto& fam) -> json {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, PowerPhi>) return json{{"family", "power"}, {"p", fam.p}};
        else if constexpr (std::is_same_v<F, VariableExponentPhi>)
          return json{{"family", "variable_exponent"}, {"p", fam.p.to_json()}};
        else if constexpr (std::is_same_v<F, DoublePhasePhi>)
          return json{{"family", "double_phase"}, {"p", fam.p}, {"q", fam.q}, {"a", fam.a.to_json()}};
        else if constexpr (std::is_same_v<F, LogPerturbedPhi>)
          return json{{"family", "log_perturbed"}, {"p", fam.p.to_json()}};
        else if constexpr (std::is_same_v<F, TablePhi>)
          return json{{"family", "orlicz_table"}, {"t", fam.t}, {"values", fam.v}};
        else if constexpr (std::is_same_v<F, StepIndicatorPhi>)
          return json{{"family", "step_indicator"}, {"threshold", fam.threshold}};
        else
          return json{{"family", "convexified"}};
      },
      family);
  j["weak_constant"] = weak_constant;
  j["equiv_band"] = equiv_band;
  return j;
}

}  // namespace orlicz
