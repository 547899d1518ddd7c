#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace orlicz {

/// Seeded random source with portable draw functions. std::mt19937_64 has a
/// fixed bit stream; the distributions below are written out explicitly so
/// that results do not depend on the standard library's distribution
/// implementations (artifact determinism requires reproducible draws).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace orlicz
