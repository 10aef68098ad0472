#pragma once

#include "biot/common.hpp"

#include <functional>

namespace biot {

/// Physical and discretization parameters.
///
/// The Lame coefficients follow from the Young modulus and Poisson ratio.
/// `kappa` is a constant SPD conductivity tensor; `s0_field`, when set,
/// overrides the constant storage coefficient `s0`.
struct ModelParams {
  double E = 1.0;
  double nu = 0.3;
  double alpha = 1.0;
  double s0 = 0.0;
  std::function<double(const Point&)> s0_field;
  Eigen::Matrix2d kappa = Eigen::Matrix2d::Identity();
  double gamma = 10.0;
  double beta = 1.0;
  double C1 = 1.0;
  double dt = 0.1;
  double T = 1.0;

  double mu() const { return E / (2.0 * (1.0 + nu)); }
  double lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
  double storage(const Point& x) const { return s0_field ? s0_field(x) : s0; }
  double kappa_normal(const Point& n) const { return n.dot(kappa * n); }

  /// Sets E and nu so that mu() and lambda() return the given values.
  static ModelParams from_lame(double mu, double lambda);

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

}  // namespace biot
