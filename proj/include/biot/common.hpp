#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biot {

using Point = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using Index = std::ptrdiff_t;

/// Selects between the OpenMP kernels and their serial reference path.
/// Both paths produce bit-identical results.
enum class Exec { serial, parallel };

/// Invalid user configuration (bad parameter, empty boundary region, ...).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Element construction failed (degenerate geometry).
class ElementError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency violation, e.g. a dimension mismatch.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace biot
