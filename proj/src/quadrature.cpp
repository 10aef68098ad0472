#include "biot/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace biot {

namespace {

// Symmetric orbits in barycentric coordinates; weights are normalized to a
// triangle of unit area and rescaled to the reference area at the end.
void add_centroid(QuadratureRule& q, double w) {
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  q.weights.push_back(w);
}

void add_orbit3(QuadratureRule& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  q.points.push_back({a, a, b});
  q.points.push_back({a, b, a});
  q.points.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) q.weights.push_back(w);
}

void add_orbit6(QuadratureRule& q, double a, double b, double w) {
  const double c = 1.0 - a - b;
  q.points.push_back({a, b, c});
  q.points.push_back({a, c, b});
  q.points.push_back({b, a, c});
  q.points.push_back({b, c, a});
  q.points.push_back({c, a, b});
  q.points.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) q.weights.push_back(w);
}

QuadratureRule finish(QuadratureRule q, int degree) {
  for (double& w : q.weights) w *= 0.5;
  q.degree = degree;
  return q;
}

QuadratureRule make_rule(int degree) {
  QuadratureRule q;
  switch (degree) {
    case 0:
    case 1:
      add_centroid(q, 1.0);
      return finish(q, 1);
    case 2:
      add_orbit3(q, 1.0 / 6.0, 1.0 / 3.0);
      return finish(q, 2);
    case 3:
    case 4:
      // Dunavant, 6 points.
      add_orbit3(q, 0.445948490915965, 0.223381589678011);
      add_orbit3(q, 0.091576213509771, 0.109951743655322);
      return finish(q, 4);
    case 5: {
      // Radon, 7 points, in closed form.
      const double s15 = std::sqrt(15.0);
      add_centroid(q, 9.0 / 40.0);
      add_orbit3(q, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
      add_orbit3(q, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
      return finish(q, 5);
    }
    case 6:
      // Dunavant, 12 points.
      add_orbit3(q, 0.249286745170910, 0.116786275726379);
      add_orbit3(q, 0.063089014491502, 0.050844906370207);
      add_orbit6(q, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      return finish(q, 6);
    default:
      throw ConfigError("unsupported triangle quadrature degree " + std::to_string(degree));
  }
}

}  // namespace

const QuadratureRule& triangle_quadrature(int degree) {
  static const std::array<QuadratureRule, max_triangle_degree + 1> rules = [] {
    std::array<QuadratureRule, max_triangle_degree + 1> r;
    for (int d = 0; d <= max_triangle_degree; ++d) r[d] = make_rule(d);
    return r;
  }();
  if (degree < 0 || degree > max_triangle_degree) {
    throw ConfigError("unsupported triangle quadrature degree " + std::to_string(degree));
  }
  return rules[degree];
}

LineRule edge_quadrature(int degree) {
  if (degree < 0 || degree > 63) {
    throw ConfigError("unsupported edge quadrature degree " + std::to_string(degree));
  }
  const int n = degree / 2 + 1;
  LineRule rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = (n == 0) ? 1.0 : p1;
      const double pnm1 = p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map from [-1,1] to [0,1], ordered increasingly.
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace biot
