// Assembly of the block-diagonal DG mass matrix, the global continuous FEM
// mass matrix and the rank-3 coupling stiffness tensor, together with all
// matrix-free operator actions built from them: the exact gradient/curl from
// the continuous space into the DG space, the weak divergence/curl back, and
// the Schur-complement actions of the implicit wave systems.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "compatdg/quadrature.hpp"
#include "compatdg/spaces.hpp"

namespace compatdg {

/// All element loops below are independent per element (scatter-adds into
/// FEM rows are the only shared writes) and are executed in a fixed order,
/// so results are bit-deterministic.
class CompatibleOperators {
 public:
  /// Requires fem.degree() == dg.degree() + 1 and both spaces on one mesh.
  /// Assembly quadrature is exact for every integrand (degree 2(N+1)).
  CompatibleOperators(const DGSpace& dg, const FEMSpace& fem);

  const DGSpace& dg() const { return *dg_; }
  const FEMSpace& fem() const { return *fem_; }

  // -- exact derivatives, continuous space -> DG space ----------------------

  /// DG coefficients of the pointwise-exact gradient of a scalar field.
  FieldDG gradient(const FieldFEM& z) const;
  /// DG coefficients of the pointwise-exact curl of a 3-component field in
  /// the z-invariant plane (in-plane derivatives only).
  FieldDG curl(const FieldFEM& a) const;

  // -- weak derivatives, DG space -> FEM right-hand sides -------------------

  /// r_p = int grad(psi_p) . w dx; the nodal divergence field is M^{-1} r.
  Eigen::VectorXd weak_div_rhs(const Eigen::MatrixXd& w) const;
  /// r_p = -int grad(psi_p) x w dx; the nodal curl field is M^{-1} r.
  Eigen::MatrixXd weak_curl_rhs(const Eigen::MatrixXd& w) const;

  // -- raw contraction kernels (DOF level, no mass solve) -------------------

  Eigen::MatrixXd grad_fem(const Eigen::VectorXd& z) const;    // n_dg x 2
  Eigen::MatrixXd curl_fem(const Eigen::MatrixXd& e3) const;   // n_dg x 3
  Eigen::VectorXd div_fem(const Eigen::MatrixXd& e) const;     // n_dg
  Eigen::VectorXd div_dg(const Eigen::MatrixXd& w) const;      // n_fem
  Eigen::MatrixXd curl_dg(const Eigen::MatrixXd& w) const;     // n_fem x 3
  Eigen::MatrixXd grad_dg(const Eigen::VectorXd& q, int m_out) const;  // n_fem x m

  void solve_mass_dg(Eigen::MatrixXd& w) const;                // w := D^{-1} w
  Eigen::MatrixXd apply_mass_dg(const Eigen::MatrixXd& w) const;
  Eigen::MatrixXd apply_mass_fem(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  const Eigen::SparseMatrix<double>& mass_fem() const { return mass_fem_; }

  // -- Schur-complement actions of the Crank-Nicolson wave systems ----------

  /// (M + dt^2/4 K D^{-1} K^T) p, symmetric positive definite.
  Eigen::VectorXd schur_apply_scalar(const Eigen::VectorXd& p, double dt) const;
  /// The electric-field wave operator; `grad_div` adds the cleaning-field
  /// grad-div block. Symmetric positive definite in both modes.
  Eigen::MatrixXd schur_apply_vector(const Eigen::MatrixXd& e, double dt,
                                     bool grad_div) const;
  /// K D^{-1} K^T p (the weak Laplacian used by the pressure projection).
  Eigen::VectorXd weak_laplacian(const Eigen::VectorXd& p) const;

  Eigen::VectorXd schur_scalar_diagonal(double dt) const;
  Eigen::MatrixXd schur_vector_diagonal(double dt, bool grad_div) const;
  /// Diagonal of K D^{-1} K^T.
  Eigen::VectorXd laplacian_diagonal() const;

  // -- access to the assembled blocks ---------------------------------------

  const Eigen::MatrixXd& kx(int elem) const { return kx_[elem]; }
  const Eigen::MatrixXd& ky(int elem) const { return ky_[elem]; }
  Eigen::MatrixXd d_block(int elem) const;

  /// Debug dumps in text triplet format "row col value".
  void dump_mass_fem(const std::string& path) const;
  void dump_stiffness(const std::string& path) const;  // row col comp value
  void dump_mass_dg(const std::string& path) const;

 private:
  void gather_fem(const Eigen::Ref<const Eigen::MatrixXd>& x, int elem,
                  Eigen::MatrixXd& loc) const;
  void scatter_fem(const Eigen::MatrixXd& loc, int elem, Eigen::MatrixXd& x) const;
  void laplacian_diag(Eigen::VectorXd& qx, Eigen::VectorXd& qy) const;

  const DGSpace* dg_;
  const FEMSpace* fem_;
  std::vector<Eigen::MatrixXd> kx_, ky_;  // per element, nloc_dg x nloc_fem
  std::vector<Eigen::LLT<Eigen::MatrixXd>> d_llt_;
  std::vector<double> d_detjac_;
  Eigen::MatrixXd d_ref_;  // reference-triangle DG mass
  Eigen::SparseMatrix<double> mass_fem_;
};

}  // namespace compatdg
