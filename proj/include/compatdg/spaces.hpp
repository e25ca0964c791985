// Global degree-of-freedom management for the element-wise discontinuous
// space and the globally continuous (periodic-identified) Lagrange space,
// plus the field containers living in them.

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "compatdg/mesh.hpp"
#include "compatdg/refelem.hpp"

namespace compatdg {

/// Element-wise polynomials of degree N, no coupling across edges.
/// DOF block of element e occupies rows [e*nloc, (e+1)*nloc).
class DGSpace {
 public:
  DGSpace(const SimplexMesh& mesh, int degree);

  const SimplexMesh& mesh() const { return *mesh_; }
  const ReferenceElement& ref() const { return ref_; }
  int degree() const { return ref_.degree(); }
  int local_dofs() const { return ref_.node_count(); }
  int total_dofs() const { return mesh_->n_triangles() * local_dofs(); }
  int offset(int elem) const { return elem * local_dofs(); }
  const AffineMap& map(int elem) const { return maps_[elem]; }

 private:
  const SimplexMesh* mesh_;
  ReferenceElement ref_;
  std::vector<AffineMap> maps_;
};

/// Continuous Lagrange space of degree M: one global DOF per geometric node
/// location (periodic partners identified), matched by coordinate dedup
/// with tolerance 1e-12 * domain size.
class FEMSpace {
 public:
  FEMSpace(const SimplexMesh& mesh, int degree);

  const SimplexMesh& mesh() const { return *mesh_; }
  const ReferenceElement& ref() const { return ref_; }
  int degree() const { return ref_.degree(); }
  int local_dofs() const { return ref_.node_count(); }
  int total_dofs() const { return n_global_; }
  int global_dof(int elem, int local) const { return elem2global_[elem * local_dofs() + local]; }
  const std::vector<int>& element_dofs() const { return elem2global_; }
  /// Canonical (wrapped) coordinate of a global DOF.
  const Eigen::Vector2d& node(int dof) const { return node_coords_[dof]; }
  const AffineMap& map(int elem) const { return maps_[elem]; }
  /// Global DOF sitting on a mesh vertex.
  int vertex_dof(int v) const { return vertex_dof_[v]; }

 private:
  const SimplexMesh* mesh_;
  ReferenceElement ref_;
  std::vector<AffineMap> maps_;
  std::vector<int> elem2global_;
  std::vector<Eigen::Vector2d> node_coords_;
  std::vector<int> vertex_dof_;
  int n_global_ = 0;
};

struct FieldDG {
  const DGSpace* space = nullptr;
  Eigen::MatrixXd coeffs;  // total_dofs x m

  FieldDG() = default;
  FieldDG(const DGSpace& s, int m)
      : space(&s), coeffs(Eigen::MatrixXd::Zero(s.total_dofs(), m)) {}
  int components() const { return static_cast<int>(coeffs.cols()); }
};

struct FieldFEM {
  const FEMSpace* space = nullptr;
  Eigen::MatrixXd values;  // total_dofs x m, continuity is structural

  FieldFEM() = default;
  FieldFEM(const FEMSpace& s, int m)
      : space(&s), values(Eigen::MatrixXd::Zero(s.total_dofs(), m)) {}
  int components() const { return static_cast<int>(values.cols()); }
};

Eigen::VectorXd eval_field(const FieldDG& f, int elem, const Eigen::Vector2d& ref_pt);
Eigen::VectorXd eval_field(const FieldFEM& f, int elem, const Eigen::Vector2d& ref_pt);

/// Nodal interpolation of smooth data; exact for polynomials of degree <= M.
FieldFEM interpolate_fem(const std::function<double(const Eigen::Vector2d&)>& f,
                         const FEMSpace& space);
FieldFEM interpolate_fem(
    const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& f, int m,
    const FEMSpace& space);

/// Element-wise nodal interpolation into the DG space. Fields built this way
/// carry no compatibility guarantee for the involution functionals.
FieldDG interpolate_dg(const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& f,
                       int m, const DGSpace& space);

/// Element-local L2 projection into the DG space (quadrature of the given
/// exactness). Same caveat as interpolate_dg on the involution functionals.
FieldDG project_dg(const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& f,
                   int m, const DGSpace& space, int quad_exactness);

}  // namespace compatdg
