#include "compatdg/operators.hpp"

#include <fstream>
#include <stdexcept>

namespace compatdg {

CompatibleOperators::CompatibleOperators(const DGSpace& dg, const FEMSpace& fem)
    : dg_(&dg), fem_(&fem) {
  if (&dg.mesh() != &fem.mesh())
    throw std::invalid_argument("CompatibleOperators: spaces must share one mesh");
  if (fem.degree() != dg.degree() + 1)
    throw std::invalid_argument("CompatibleOperators: fem degree must be dg degree + 1");

  const SimplexMesh& mesh = dg.mesh();
  const int ne = mesh.n_triangles();
  const int nu = dg.local_dofs();
  const int nw = fem.local_dofs();
  const QuadratureRule quad = triangle_quadrature(2 * fem.degree());

  // Reference-element tables; affine elements only need |det J| and J^{-T}.
  const int nq = quad.size();
  Eigen::MatrixXd phi(nq, nu), psi(nq, nw);
  std::vector<Eigen::MatrixX2d> dpsi(nq);
  for (int q = 0; q < nq; ++q) {
    phi.row(q) = dg.ref().basis_at(quad.points[q]).transpose();
    psi.row(q) = fem.ref().basis_at(quad.points[q]).transpose();
    dpsi[q] = fem.ref().grad_basis_at(quad.points[q]);
  }
  d_ref_ = Eigen::MatrixXd::Zero(nu, nu);
  Eigen::MatrixXd m_ref = Eigen::MatrixXd::Zero(nw, nw);
  Eigen::MatrixXd kxi = Eigen::MatrixXd::Zero(nu, nw), keta = Eigen::MatrixXd::Zero(nu, nw);
  for (int q = 0; q < nq; ++q) {
    double w = quad.weights[q];
    d_ref_ += w * phi.row(q).transpose() * phi.row(q);
    m_ref += w * psi.row(q).transpose() * psi.row(q);
    kxi += w * phi.row(q).transpose() * dpsi[q].col(0).transpose();
    keta += w * phi.row(q).transpose() * dpsi[q].col(1).transpose();
  }

  kx_.resize(ne);
  ky_.resize(ne);
  d_llt_.resize(ne);
  d_detjac_.resize(ne);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(ne) * nw * nw);
  for (int e = 0; e < ne; ++e) {
    const AffineMap& map = dg.map(e);
    const double adet = std::abs(map.det);
    d_detjac_[e] = adet;
    d_llt_[e].compute(adet * d_ref_);
    if (d_llt_[e].info() != Eigen::Success)
      throw std::runtime_error("CompatibleOperators: singular DG mass block on element " +
                               std::to_string(e));
    // physical gradient = J^{-T} * reference gradient
    const Eigen::Matrix2d& g = map.inv_jac_t;
    kx_[e] = adet * (g(0, 0) * kxi + g(0, 1) * keta);
    ky_[e] = adet * (g(1, 0) * kxi + g(1, 1) * keta);
    for (int a = 0; a < nw; ++a)
      for (int b = 0; b < nw; ++b)
        trips.emplace_back(fem.global_dof(e, a), fem.global_dof(e, b), adet * m_ref(a, b));
  }
  mass_fem_.resize(fem.total_dofs(), fem.total_dofs());
  mass_fem_.setFromTriplets(trips.begin(), trips.end());
  mass_fem_.makeCompressed();
}

void CompatibleOperators::gather_fem(const Eigen::Ref<const Eigen::MatrixXd>& x, int elem,
                                     Eigen::MatrixXd& loc) const {
  const int nw = fem_->local_dofs();
  loc.resize(nw, x.cols());
  for (int l = 0; l < nw; ++l) loc.row(l) = x.row(fem_->global_dof(elem, l));
}

void CompatibleOperators::scatter_fem(const Eigen::MatrixXd& loc, int elem,
                                      Eigen::MatrixXd& x) const {
  for (int l = 0; l < fem_->local_dofs(); ++l)
    x.row(fem_->global_dof(elem, l)) += loc.row(l);
}

FieldDG CompatibleOperators::gradient(const FieldFEM& z) const {
  FieldDG out(*dg_, 2);
  out.coeffs = grad_fem(z.values.col(0));
  solve_mass_dg(out.coeffs);
  return out;
}

FieldDG CompatibleOperators::curl(const FieldFEM& a) const {
  FieldDG out(*dg_, 3);
  out.coeffs = curl_fem(a.values);
  solve_mass_dg(out.coeffs);
  return out;
}

Eigen::VectorXd CompatibleOperators::weak_div_rhs(const Eigen::MatrixXd& w) const {
  return div_dg(w);
}

Eigen::MatrixXd CompatibleOperators::weak_curl_rhs(const Eigen::MatrixXd& w) const {
  return -curl_dg(w);
}

Eigen::MatrixXd CompatibleOperators::grad_fem(const Eigen::VectorXd& z) const {
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  Eigen::MatrixXd out(dg_->total_dofs(), 2);
  Eigen::MatrixXd loc(fem_->local_dofs(), 1);
  for (int e = 0; e < ne; ++e) {
    gather_fem(z, e, loc);
    out.block(e * nu, 0, nu, 1).noalias() = kx_[e] * loc;
    out.block(e * nu, 1, nu, 1).noalias() = ky_[e] * loc;
  }
  return out;
}

Eigen::MatrixXd CompatibleOperators::curl_fem(const Eigen::MatrixXd& e3) const {
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  Eigen::MatrixXd out(dg_->total_dofs(), 3);
  Eigen::MatrixXd loc(fem_->local_dofs(), 3);
  for (int e = 0; e < ne; ++e) {
    gather_fem(e3, e, loc);
    out.block(e * nu, 0, nu, 1).noalias() = ky_[e] * loc.col(2);
    out.block(e * nu, 1, nu, 1).noalias() = -kx_[e] * loc.col(2);
    out.block(e * nu, 2, nu, 1).noalias() = kx_[e] * loc.col(1);
    out.block(e * nu, 2, nu, 1).noalias() -= ky_[e] * loc.col(0);
  }
  return out;
}

Eigen::VectorXd CompatibleOperators::div_fem(const Eigen::MatrixXd& ef) const {
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  Eigen::VectorXd out(dg_->total_dofs());
  Eigen::MatrixXd loc(fem_->local_dofs(), ef.cols());
  for (int e = 0; e < ne; ++e) {
    gather_fem(ef, e, loc);
    out.segment(e * nu, nu).noalias() = kx_[e] * loc.col(0);
    out.segment(e * nu, nu).noalias() += ky_[e] * loc.col(1);
  }
  return out;
}

Eigen::VectorXd CompatibleOperators::div_dg(const Eigen::MatrixXd& w) const {
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(fem_->total_dofs(), 1);
  Eigen::MatrixXd loc(fem_->local_dofs(), 1);
  for (int e = 0; e < ne; ++e) {
    loc.noalias() = kx_[e].transpose() * w.block(e * nu, 0, nu, 1);
    loc.noalias() += ky_[e].transpose() * w.block(e * nu, 1, nu, 1);
    scatter_fem(loc, e, out);
  }
  return out.col(0);
}

Eigen::MatrixXd CompatibleOperators::curl_dg(const Eigen::MatrixXd& w) const {
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(fem_->total_dofs(), 3);
  Eigen::MatrixXd loc(fem_->local_dofs(), 3);
  for (int e = 0; e < ne; ++e) {
    auto w1 = w.block(e * nu, 0, nu, 1), w2 = w.block(e * nu, 1, nu, 1),
         w3 = w.block(e * nu, 2, nu, 1);
    loc.col(0).noalias() = ky_[e].transpose() * w3;
    loc.col(1).noalias() = -kx_[e].transpose() * w3;
    loc.col(2).noalias() = kx_[e].transpose() * w2;
    loc.col(2).noalias() -= ky_[e].transpose() * w1;
    scatter_fem(loc, e, out);
  }
  return out;
}

Eigen::MatrixXd CompatibleOperators::grad_dg(const Eigen::VectorXd& q, int m_out) const {
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(fem_->total_dofs(), m_out);
  Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(fem_->local_dofs(), m_out);
  for (int e = 0; e < ne; ++e) {
    loc.col(0).noalias() = kx_[e].transpose() * q.segment(e * nu, nu);
    loc.col(1).noalias() = ky_[e].transpose() * q.segment(e * nu, nu);
    scatter_fem(loc, e, out);
  }
  return out;
}

void CompatibleOperators::solve_mass_dg(Eigen::MatrixXd& w) const {
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  for (int e = 0; e < ne; ++e) {
    auto blk = w.middleRows(e * nu, nu);
    d_llt_[e].solveInPlace(blk);
  }
}

Eigen::MatrixXd CompatibleOperators::apply_mass_dg(const Eigen::MatrixXd& w) const {
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  Eigen::MatrixXd out(w.rows(), w.cols());
  for (int e = 0; e < ne; ++e)
    out.middleRows(e * nu, nu) = d_detjac_[e] * (d_ref_ * w.middleRows(e * nu, nu));
  return out;
}

Eigen::MatrixXd CompatibleOperators::apply_mass_fem(
    const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  return mass_fem_ * x;
}

Eigen::VectorXd CompatibleOperators::weak_laplacian(const Eigen::VectorXd& p) const {
  Eigen::MatrixXd g = grad_fem(p);
  solve_mass_dg(g);
  return div_dg(g);
}

Eigen::VectorXd CompatibleOperators::schur_apply_scalar(const Eigen::VectorXd& p,
                                                        double dt) const {
  return mass_fem_ * p + (0.25 * dt * dt) * weak_laplacian(p);
}

Eigen::MatrixXd CompatibleOperators::schur_apply_vector(const Eigen::MatrixXd& e,
                                                        double dt, bool grad_div) const {
  Eigen::MatrixXd c = curl_fem(e);
  solve_mass_dg(c);
  Eigen::MatrixXd out = mass_fem_ * e - (0.25 * dt * dt) * curl_dg(c);
  if (grad_div) {
    Eigen::MatrixXd d = div_fem(e);
    solve_mass_dg(d);
    out += (0.25 * dt * dt) * grad_dg(d.col(0), static_cast<int>(e.cols()));
  }
  return out;
}

void CompatibleOperators::laplacian_diag(Eigen::VectorXd& qx, Eigen::VectorXd& qy) const {
  const int ne = dg_->mesh().n_triangles(), nw = fem_->local_dofs();
  qx = Eigen::VectorXd::Zero(fem_->total_dofs());
  qy = Eigen::VectorXd::Zero(fem_->total_dofs());
  for (int e = 0; e < ne; ++e) {
    Eigen::MatrixXd dinv_kx = d_llt_[e].solve(kx_[e]);
    Eigen::MatrixXd dinv_ky = d_llt_[e].solve(ky_[e]);
    for (int p = 0; p < nw; ++p) {
      int g = fem_->global_dof(e, p);
      qx(g) += kx_[e].col(p).dot(dinv_kx.col(p));
      qy(g) += ky_[e].col(p).dot(dinv_ky.col(p));
    }
  }
}

Eigen::VectorXd CompatibleOperators::laplacian_diagonal() const {
  Eigen::VectorXd qx, qy;
  laplacian_diag(qx, qy);
  return qx + qy;
}

Eigen::VectorXd CompatibleOperators::schur_scalar_diagonal(double dt) const {
  Eigen::VectorXd qx, qy;
  laplacian_diag(qx, qy);
  return mass_fem_.diagonal() + (0.25 * dt * dt) * (qx + qy);
}

Eigen::MatrixXd CompatibleOperators::schur_vector_diagonal(double dt, bool grad_div) const {
  Eigen::VectorXd qx, qy;
  laplacian_diag(qx, qy);
  Eigen::MatrixXd diag(fem_->total_dofs(), 3);
  diag.col(0) = qy;
  diag.col(1) = qx;
  diag.col(2) = qx + qy;
  if (grad_div) {
    diag.col(0) += qx;
    diag.col(1) += qy;
  }
  diag *= 0.25 * dt * dt;
  diag.colwise() += mass_fem_.diagonal();
  return diag;
}

Eigen::MatrixXd CompatibleOperators::d_block(int elem) const {
  return d_detjac_[elem] * d_ref_;
}

void CompatibleOperators::dump_mass_fem(const std::string& path) const {
  std::ofstream out(path);
  out.precision(17);
  for (int k = 0; k < mass_fem_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mass_fem_, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

void CompatibleOperators::dump_stiffness(const std::string& path) const {
  std::ofstream out(path);
  out.precision(17);
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs(), nw = fem_->local_dofs();
  for (int e = 0; e < ne; ++e)
    for (int c = 0; c < nu; ++c)
      for (int p = 0; p < nw; ++p)
        out << e * nu + c << ' ' << fem_->global_dof(e, p) << " 0 " << kx_[e](c, p)
            << "\n" << e * nu + c << ' ' << fem_->global_dof(e, p) << " 1 "
            << ky_[e](c, p) << '\n';
}

void CompatibleOperators::dump_mass_dg(const std::string& path) const {
  std::ofstream out(path);
  out.precision(17);
  const int ne = dg_->mesh().n_triangles(), nu = dg_->local_dofs();
  for (int e = 0; e < ne; ++e)
    for (int a = 0; a < nu; ++a)
      for (int b = 0; b < nu; ++b)
        out << e * nu + a << ' ' << e * nu + b << ' ' << d_detjac_[e] * d_ref_(a, b) << '\n';
}

}  // namespace compatdg
