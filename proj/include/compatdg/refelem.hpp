// Nodal Lagrange basis on the unit reference triangle, plus the affine map
// to physical elements and Gauss trace points on the reference edges.

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace compatdg {

/// Nodal Lagrange basis of a given degree on the equispaced barycentric
/// lattice of the unit triangle. Basis coefficients are obtained from the
/// inverse of a graded-monomial Vandermonde matrix (full-pivot solve).
class ReferenceElement {
 public:
  explicit ReferenceElement(int degree);  // throws outside [0, 6]

  int degree() const { return degree_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }

  /// Values of all basis functions at a reference point.
  Eigen::VectorXd basis_at(const Eigen::Vector2d& p) const;
  /// Reference gradients of all basis functions at a reference point
  /// (row i = grad of basis i).
  Eigen::MatrixX2d grad_basis_at(const Eigen::Vector2d& p) const;

  /// Node indices of the three reference vertices (0,0), (1,0), (0,1).
  std::array<int, 3> vertex_nodes() const;

  double vandermonde_condition() const { return cond_; }

 private:
  int degree_;
  std::vector<Eigen::Vector2d> nodes_;
  // exponents_[k] = (a, b) of monomial x^a y^b in graded order
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeff_;  // coeff_(mono, node): nodal basis in monomial form
  double cond_ = 0.0;
};

/// Affine map x = v0 + J * (xi, eta) from the reference triangle onto
/// a physical triangle with vertices a, b, c.
struct AffineMap {
  Eigen::Vector2d v0;
  Eigen::Matrix2d jac;
  Eigen::Matrix2d inv_jac_t;  // transforms reference gradients to physical
  double det = 0.0;           // signed; |det| = 2 * area

  Eigen::Vector2d to_physical(const Eigen::Vector2d& ref) const { return v0 + jac * ref; }
  Eigen::Vector2d to_reference(const Eigen::Vector2d& x) const {
    return jac.inverse() * (x - v0);
  }
};

/// Throws std::invalid_argument for a degenerate (zero-area) triangle.
AffineMap affine_map(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c);

/// Gauss-Legendre points on reference edge 0, 1 or 2 (edges (v0,v1), (v1,v2),
/// (v2,v0)), traversed from the first vertex to the second.
struct EdgeTrace {
  std::vector<Eigen::Vector2d> points;   // reference coordinates
  std::vector<double> weights;           // Gauss weights on [0,1]
  Eigen::Vector2d tangent;               // unit tangent in reference coords
};
EdgeTrace trace_points(int edge_local_id, int n_points);

}  // namespace compatdg
