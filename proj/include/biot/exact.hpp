#pragma once

#include "biot/elements.hpp"
#include "biot/params.hpp"

#include <functional>

namespace biot {

/// Closed-form displacement/pressure pair and the loads it induces.
struct ExactSolution {
  std::function<Point(const Point&, double)> u;
  std::function<Jacobian(const Point&, double)> grad_u;
  std::function<double(const Point&, double)> p;
  std::function<Point(const Point&, double)> grad_p;
  /// div(kappa grad p), needed by the elliptic projection of p.
  std::function<double(const Point&, double)> div_kappa_grad_p;
  std::function<Point(const Point&, double)> f;
  std::function<double(const Point&, double)> g;
  bool identically_zero = false;
};

/// u = (-pi x^2(1-x)^2 sin^2(pi y) cos 2t, -pi y^2(1-y)^2 sin^2(pi x) cos 2t),
/// p = x(1-x) y(1-y) cos t, with
/// f = -div(2 mu eps(u) + (lambda div u - alpha p) I) and
/// g = s0 p_t + alpha div u_t - div(kappa grad p).
ExactSolution manufactured_loads(const ModelParams& params);

ExactSolution zero_solution();

}  // namespace biot
