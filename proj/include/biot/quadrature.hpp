#pragma once

#include "biot/common.hpp"

#include <array>
#include <vector>

namespace biot {

/// Symmetric rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}.
/// Points are barycentric; weights sum to 1/2 (the reference area).
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre rule on [0,1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int max_triangle_degree = 6;

/// Smallest tabulated symmetric rule exact to at least `degree`.
/// Throws ConfigError for degree < 0 or degree > max_triangle_degree.
const QuadratureRule& triangle_quadrature(int degree);

/// Gauss-Legendre rule with ceil((degree+1)/2) points.
LineRule edge_quadrature(int degree);

/// Degree used by every assembly and error integral.
inline constexpr int assembly_degree = 6;

}  // namespace biot
