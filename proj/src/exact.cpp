#include "biot/exact.hpp"

#include <cmath>
#include <numbers>

namespace biot {

namespace {

constexpr double pi = std::numbers::pi;

// x^2 (1-x)^2 and derivatives.
double bump(double x) { return x * x * (1 - x) * (1 - x); }
double bump_d(double x) { return 2 * x * (1 - x) * (1 - 2 * x); }
double bump_dd(double x) { return 2 - 12 * x + 12 * x * x; }
// sin^2(pi x) and derivatives.
double wave(double x) { return std::sin(pi * x) * std::sin(pi * x); }
double wave_d(double x) { return pi * std::sin(2 * pi * x); }
double wave_dd(double x) { return 2 * pi * pi * std::cos(2 * pi * x); }
// x (1-x) and derivatives.
double para(double x) { return x * (1 - x); }
double para_d(double x) { return 1 - 2 * x; }

// Spatial parts of u (time factors applied by the caller).
struct UParts {
  double u1, u2;
  double u1_x, u1_y, u2_x, u2_y;
  double u1_xx, u1_yy, u1_xy, u2_xx, u2_yy, u2_xy;
};

UParts u_parts(const Point& q) {
  const double x = q.x(), y = q.y();
  UParts d;
  d.u1 = -pi * bump(x) * wave(y);
  d.u2 = -pi * bump(y) * wave(x);
  d.u1_x = -pi * bump_d(x) * wave(y);
  d.u1_y = -pi * bump(x) * wave_d(y);
  d.u2_x = -pi * bump(y) * wave_d(x);
  d.u2_y = -pi * bump_d(y) * wave(x);
  d.u1_xx = -pi * bump_dd(x) * wave(y);
  d.u1_yy = -pi * bump(x) * wave_dd(y);
  d.u1_xy = -pi * bump_d(x) * wave_d(y);
  d.u2_xx = -pi * bump(y) * wave_dd(x);
  d.u2_yy = -pi * bump_dd(y) * wave(x);
  d.u2_xy = -pi * bump_d(y) * wave_d(x);
  return d;
}

}  // namespace

ExactSolution manufactured_loads(const ModelParams& params) {
  const double mu = params.mu();
  const double lambda = params.lambda();
  const double alpha = params.alpha;
  const Eigen::Matrix2d kappa = params.kappa;
  const ModelParams copy = params;

  ExactSolution ex;
  ex.u = [](const Point& x, double t) {
    const UParts d = u_parts(x);
    return Point(std::cos(2 * t) * Point(d.u1, d.u2));
  };
  ex.grad_u = [](const Point& x, double t) {
    const UParts d = u_parts(x);
    Jacobian j;
    j << d.u1_x, d.u1_y, d.u2_x, d.u2_y;
    return Jacobian(j * std::cos(2 * t));
  };
  ex.p = [](const Point& x, double t) { return para(x.x()) * para(x.y()) * std::cos(t); };
  ex.grad_p = [](const Point& x, double t) {
    return Point(std::cos(t) * Point(para_d(x.x()) * para(x.y()), para(x.x()) * para_d(x.y())));
  };
  ex.div_kappa_grad_p = [kappa](const Point& x, double t) {
    const double pxx = -2 * para(x.y());
    const double pyy = -2 * para(x.x());
    const double pxy = para_d(x.x()) * para_d(x.y());
    return (kappa(0, 0) * pxx + (kappa(0, 1) + kappa(1, 0)) * pxy + kappa(1, 1) * pyy) *
           std::cos(t);
  };
  ex.f = [mu, lambda, alpha](const Point& x, double t) {
    const UParts d = u_parts(x);
    const double c = std::cos(2 * t);
    const double ct = std::cos(t);
    const double px = para_d(x.x()) * para(x.y()) * ct;
    const double py = para(x.x()) * para_d(x.y()) * ct;
    const double f1 = -mu * (d.u1_xx + d.u1_yy) * c - (mu + lambda) * (d.u1_xx + d.u2_xy) * c +
                      alpha * px;
    const double f2 = -mu * (d.u2_xx + d.u2_yy) * c - (mu + lambda) * (d.u1_xy + d.u2_yy) * c +
                      alpha * py;
    return Point(f1, f2);
  };
  const auto div_kgp = ex.div_kappa_grad_p;
  ex.g = [copy, alpha, div_kgp](const Point& x, double t) {
    const UParts d = u_parts(x);
    const double p_t = -para(x.x()) * para(x.y()) * std::sin(t);
    const double div_u_t = (d.u1_x + d.u2_y) * (-2 * std::sin(2 * t));
    return copy.storage(x) * p_t + alpha * div_u_t - div_kgp(x, t);
  };
  return ex;
}

ExactSolution zero_solution() {
  ExactSolution ex;
  ex.u = [](const Point&, double) { return Point(0, 0); };
  ex.grad_u = [](const Point&, double) { return Jacobian(Jacobian::Zero()); };
  ex.p = [](const Point&, double) { return 0.0; };
  ex.grad_p = [](const Point&, double) { return Point(0, 0); };
  ex.div_kappa_grad_p = [](const Point&, double) { return 0.0; };
  ex.f = [](const Point&, double) { return Point(0, 0); };
  ex.g = [](const Point&, double) { return 0.0; };
  ex.identically_zero = true;
  return ex;
}

}  // namespace biot
