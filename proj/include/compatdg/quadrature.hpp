// Quadrature rules on the unit reference triangle {(x,y): x,y >= 0, x+y <= 1}
// and Gauss-Legendre rules on [0,1].

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace compatdg {

/// Positive-weight rule on the reference triangle, exact for all polynomials
/// of total degree <= exactness. Weights sum to the triangle area 1/2.
struct QuadratureRule {
  int exactness = 0;
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Symmetric tabulated rule for low exactness, collapsed tensor Gauss above.
/// Throws std::invalid_argument outside [0, 40].
QuadratureRule triangle_quadrature(int exactness);

/// n-point Gauss-Legendre nodes and weights on [0,1] (exact to degree 2n-1).
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace compatdg
