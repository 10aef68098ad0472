#include "biot/params.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace biot {

ModelParams ModelParams::from_lame(double mu, double lambda) {
  ModelParams p;
  p.nu = lambda / (2.0 * (lambda + mu));
  p.E = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
  return p;
}

void ModelParams::validate() const {
  const auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(E > 0.0)) fail("E must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) fail("nu must satisfy 0 <= nu < 1/2, got " + std::to_string(nu));
  if (!(lambda() > 0.0)) fail("lambda must be positive (nu > 0 required)");
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (!(s0 >= 0.0)) fail("s0 must be nonnegative");
  if (!(gamma > 0.0)) fail("gamma must be positive");
  if (!(beta >= 0.0)) fail("beta must be nonnegative");
  if (!(C1 >= 0.0)) fail("C1 must be nonnegative");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(T > 0.0)) fail("T must be positive");
  if (std::abs(kappa(0, 1) - kappa(1, 0)) > 1e-14 * kappa.norm()) fail("kappa must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(kappa);
  if (!(eig.eigenvalues()[0] > 0.0)) fail("kappa must be positive definite");
}

}  // namespace biot
