#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

/// Bad user input: malformed JSON, invalid config values, grids that violate
/// a documented precondition.
class input_error : public std::runtime_error {
public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluation outside the domain of a spatial coefficient or field.
class domain_error : public std::runtime_error {
public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// Ball quadrature cannot be performed: empty intersection with the active
/// grid, or fewer nodes than the minimum required for a stable average.
class ball_error : public std::runtime_error {
public:
  explicit ball_error(const std::string& what) : std::runtime_error(what) {}
};

/// Norm bisection failed: modular stays infinite up to the scale cap, or the
/// iteration limit was hit before the bracket closed.
class norm_error : public std::runtime_error {
public:
  explicit norm_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace orlicz
