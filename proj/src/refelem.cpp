#include "compatdg/refelem.hpp"

#include <cmath>
#include <stdexcept>

#include "compatdg/quadrature.hpp"

namespace compatdg {

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  if (degree < 0 || degree > 6)
    throw std::invalid_argument("ReferenceElement: degree " + std::to_string(degree) +
                                " outside supported range [0, 6]");
  if (degree == 0) {
    nodes_.emplace_back(1.0 / 3.0, 1.0 / 3.0);
  } else {
    for (int j = 0; j <= degree; ++j)
      for (int i = 0; i <= degree - j; ++i)
        nodes_.emplace_back(double(i) / degree, double(j) / degree);
  }
  for (int total = 0; total <= degree; ++total)
    for (int b = 0; b <= total; ++b) exponents_.push_back({total - b, b});

  const int n = node_count();
  Eigen::MatrixXd vand(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      vand(i, k) = std::pow(nodes_[i].x(), exponents_[k][0]) *
                   std::pow(nodes_[i].y(), exponents_[k][1]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(vand);
  if (!lu.isInvertible())
    throw std::runtime_error("ReferenceElement: singular Vandermonde matrix");
  coeff_ = lu.inverse();  // coeff_(mono, node) after transpose below
  // basis_j(x) = sum_k coeff_(k, j) mono_k(x) with V * coeff = I column-wise
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vand);
  cond_ = svd.singularValues()(0) / svd.singularValues()(n - 1);
}

Eigen::VectorXd ReferenceElement::basis_at(const Eigen::Vector2d& p) const {
  const int n = node_count();
  Eigen::VectorXd mono(n);
  for (int k = 0; k < n; ++k)
    mono(k) = std::pow(p.x(), exponents_[k][0]) * std::pow(p.y(), exponents_[k][1]);
  return coeff_.transpose() * mono;
}

Eigen::MatrixX2d ReferenceElement::grad_basis_at(const Eigen::Vector2d& p) const {
  const int n = node_count();
  Eigen::MatrixX2d dmono(n, 2);
  for (int k = 0; k < n; ++k) {
    int a = exponents_[k][0], b = exponents_[k][1];
    dmono(k, 0) = (a == 0) ? 0.0 : a * std::pow(p.x(), a - 1) * std::pow(p.y(), b);
    dmono(k, 1) = (b == 0) ? 0.0 : b * std::pow(p.x(), a) * std::pow(p.y(), b - 1);
  }
  return coeff_.transpose() * dmono;
}

std::array<int, 3> ReferenceElement::vertex_nodes() const {
  if (degree_ == 0) return {0, 0, 0};
  return {0, degree_, node_count() - 1};
}

AffineMap affine_map(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c) {
  AffineMap m;
  m.v0 = a;
  m.jac.col(0) = b - a;
  m.jac.col(1) = c - a;
  m.det = m.jac.determinant();
  if (m.det == 0.0) throw std::invalid_argument("affine_map: degenerate triangle");
  Eigen::Matrix2d inv;
  inv << m.jac(1, 1), -m.jac(0, 1), -m.jac(1, 0), m.jac(0, 0);
  inv /= m.det;
  m.inv_jac_t = inv.transpose();
  return m;
}

EdgeTrace trace_points(int edge_local_id, int n_points) {
  if (edge_local_id < 0 || edge_local_id > 2)
    throw std::invalid_argument("trace_points: edge id must be 0, 1 or 2");
  std::vector<double> t, w;
  gauss_legendre_01(n_points, t, w);
  EdgeTrace tr;
  tr.weights = w;
  tr.points.reserve(n_points);
  for (double s : t) {
    switch (edge_local_id) {
      case 0: tr.points.emplace_back(s, 0.0); break;
      case 1: tr.points.emplace_back(1.0 - s, s); break;
      case 2: tr.points.emplace_back(0.0, 1.0 - s); break;
    }
  }
  switch (edge_local_id) {
    case 0: tr.tangent = Eigen::Vector2d(1.0, 0.0); break;
    case 1: tr.tangent = Eigen::Vector2d(-1.0, 1.0).normalized(); break;
    case 2: tr.tangent = Eigen::Vector2d(0.0, -1.0); break;
  }
  return tr;
}

}  // namespace compatdg
