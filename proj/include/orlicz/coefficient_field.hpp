#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "orlicz/domain_spec.hpp"
#include "orlicz/errors.hpp"

namespace orlicz {

/// Spatial coefficient given by a named closed-form expression. Fields of
/// this kind parameterize Phi-function families (variable exponents, double
/// phase weights) and are evaluable at arbitrary points, not only grid nodes.
///
/// Catalog:
///   constant     v
///   x            offset + scale * x_1
///   sine         offset + amplitude * sin(frequency * x_1 + phase)
///   step         offset + amplitude * S((x_1 - location)/width),
///                S = (1 + tanh u)/2; width = 0 gives the sharp jump x_1 > location
///   holder_bump  offset + amplitude * |x - center|^alpha
///   log_holder   offset + amplitude / log(e + 1/|x - center|)
class CoefficientField {
public:
  CoefficientField() : kind_(Kind::constant), a_(0) {}

  static CoefficientField constant(double v) {
    CoefficientField f;
    f.kind_ = Kind::constant;
    f.a_ = v;
    return f;
  }
  static CoefficientField linear_x(double offset = 0, double scale = 1) {
    CoefficientField f;
    f.kind_ = Kind::linear_x;
    f.a_ = offset;
    f.b_ = scale;
    return f;
  }
  static CoefficientField sine(double offset, double amplitude, double frequency, double phase = 0) {
    CoefficientField f;
    f.kind_ = Kind::sine;
    f.a_ = offset;
    f.b_ = amplitude;
    f.c_ = frequency;
    f.d_ = phase;
    return f;
  }
  static CoefficientField step(double offset, double amplitude, double location, double width = 0) {
    CoefficientField f;
    f.kind_ = Kind::step;
    f.a_ = offset;
    f.b_ = amplitude;
    f.c_ = location;
    f.d_ = width;
    return f;
  }
  static CoefficientField holder_bump(double offset, double amplitude, Point center, double alpha) {
    CoefficientField f;
    f.kind_ = Kind::holder_bump;
    f.a_ = offset;
    f.b_ = amplitude;
    f.center_ = center;
    f.c_ = alpha;
    return f;
  }
  static CoefficientField log_holder(double offset, double amplitude, Point center) {
    CoefficientField f;
    f.kind_ = Kind::log_holder;
    f.a_ = offset;
    f.b_ = amplitude;
    f.center_ = center;
    return f;
  }

  double operator()(const Point& p, int dim) const {
    switch (kind_) {
      case Kind::constant:
        return a_;
      case Kind::linear_x:
        return a_ + b_ * p[0];
      case Kind::sine:
        return a_ + b_ * std::sin(c_ * p[0] + d_);
      case Kind::step: {
        const double u = p[0] - c_;
        if (d_ == 0.0) return a_ + (u > 0 ? b_ : 0.0);
        return a_ + b_ * 0.5 * (1.0 + std::tanh(u / d_));
      }
      case Kind::holder_bump: {
        const double r = dist(p, center_, dim);
        if (r == 0.0) {
          if (c_ > 0) return a_;
          if (c_ == 0) return a_ + b_;
          return std::numeric_limits<double>::infinity();
        }
        return a_ + b_ * std::pow(r, c_);
      }
      case Kind::log_holder: {
        const double r = dist(p, center_, dim);
        if (r == 0.0) return a_;
        return a_ + b_ / std::log(std::exp(1.0) + 1.0 / r);
      }
    }
    return a_;
  }

  bool is_constant() const { return kind_ == Kind::constant; }
  double constant_value() const { return a_; }

  static CoefficientField from_json(const json& j) {
    if (j.is_number()) return constant(j.get<double>());
    const std::string name = j.at("expr").get<std::string>();
    auto opt = [&j](const char* key, double dflt) { return j.contains(key) ? j.at(key).get<double>() : dflt; };
    auto center_of = [&j]() {
      Point c{};
      if (j.contains("center")) {
        const auto& arr = j.at("center");
        for (std::size_t d = 0; d < arr.size() && d < kMaxDim; ++d) c[d] = arr.at(d).get<double>();
      }
      return c;
    };
    if (name == "const" || name == "constant") return constant(j.at("value").get<double>());
    if (name == "x") return linear_x(opt("offset", 0.0), opt("scale", 1.0));
    if (name == "sine") return sine(opt("offset", 0.0), opt("amplitude", 1.0), opt("frequency", 1.0), opt("phase", 0.0));
    if (name == "step") return step(opt("offset", 0.0), opt("amplitude", 1.0), opt("location", 0.0), opt("width", 0.0));
    if (name == "holder_bump") return holder_bump(opt("offset", 0.0), opt("amplitude", 1.0), center_of(), opt("alpha", 0.5));
    if (name == "log_holder") return log_holder(opt("offset", 0.0), opt("amplitude", 1.0), center_of());
    throw input_error("unknown coefficient expression '" + name + "'");
  }

  json to_json() const {
    switch (kind_) {
      case Kind::constant:
        return json{{"expr", "const"}, {"value", a_}};
      case Kind::linear_x:
        return json{{"expr", "x"}, {"offset", a_}, {"scale", b_}};
      case Kind::sine:
        return json{{"expr", "sine"}, {"offset", a_}, {"amplitude", b_}, {"frequency", c_}, {"phase", d_}};
      case Kind::step:
        return json{{"expr", "step"}, {"offset", a_}, {"amplitude", b_}, {"location", c_}, {"width", d_}};
      case Kind::holder_bump:
        return json{{"expr", "holder_bump"}, {"offset", a_},        {"amplitude", b_},
                    {"center", {center_[0], center_[1]}}, {"alpha", c_}};
      case Kind::log_holder:
        return json{{"expr", "log_holder"}, {"offset", a_}, {"amplitude", b_}, {"center", {center_[0], center_[1]}}};
    }
    return json{};
  }

private:
  enum class Kind { constant, linear_x, sine, step, holder_bump, log_holder };
  Kind kind_;
  double a_ = 0, b_ = 0, c_ = 0, d_ = 0;
  Point center_{};
};

}  // namespace orlicz
