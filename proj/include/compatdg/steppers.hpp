// Crank-Nicolson / semi-implicit time steppers for the four systems.
// Each implicit update eliminates the block-diagonal DG mass through the
// Schur complement and solves the remaining SPD system with matrix-free CG,
// warm-started from the previous step.

#pragma once

#include <optional>
#include <vector>

#include "compatdg/cg.hpp"
#include "compatdg/operators.hpp"

namespace compatdg {

struct StepReport {
  int cg_iterations = 0;
  double residual = 0.0;
  double energy_before = 0.0;  // filled by the run driver
  double energy_after = 0.0;
  double wall_time = 0.0;
  bool converged = true;
  bool cfl_warning = false;
};

struct CGFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// v in the DG space (m=2), p continuous (m=1).
class AcousticsStepper {
 public:
  AcousticsStepper(const CompatibleOperators& ops, const CGConfig& cg);
  StepReport step(FieldDG& v, FieldFEM& p, double dt);

 private:
  const CompatibleOperators* ops_;
  CGConfig cg_;
  std::optional<Eigen::VectorXd> diag_;
  double diag_dt_ = -1.0;
  Eigen::VectorXd prev_;  // previous solution, for the extrapolated warm start
};

/// B in the DG space (m=3), E continuous (m=3).
class MaxwellStepper {
 public:
  MaxwellStepper(const CompatibleOperators& ops, const CGConfig& cg);
  StepReport step(FieldDG& b, FieldFEM& e, double dt);

 private:
  const CompatibleOperators* ops_;
  CGConfig cg_;
  std::optional<Eigen::MatrixXd> diag_;
  double diag_dt_ = -1.0;
  Eigen::VectorXd prev_;
};

/// B, q in the DG space; E, p continuous. The scalar and vector implicit
/// systems are independent and solved in that order.
class MaxwellGLMStepper {
 public:
  MaxwellGLMStepper(const CompatibleOperators& ops, const CGConfig& cg);
  StepReport step(FieldDG& b, FieldDG& q, FieldFEM& e, FieldFEM& p, double dt);

 private:
  const CompatibleOperators* ops_;
  CGConfig cg_;
  std::optional<Eigen::VectorXd> diag_s_;
  std::optional<Eigen::MatrixXd> diag_v_;
  double diag_dt_ = -1.0;
  Eigen::VectorXd prev_p_, prev_e_;
};

/// Projection scheme: explicit convective predictor with a Ducros-type
/// numerical flux, pressure Poisson solve with one strongly pinned DOF,
/// then the divergence-free velocity correction.
class EulerStepper {
 public:
  /// `pin_point`: the pressure is pinned to zero at the FEM DOF nearest
  /// this location. Requires a fully periodic mesh.
  EulerStepper(const CompatibleOperators& ops, const CGConfig& cg, double rho,
               const Eigen::Vector2d& pin_point);

  StepReport step(FieldDG& v, FieldFEM& p, double dt);
  int pinned_dof() const { return pin_; }

  /// Predictor exposed for the energy-stability checks.
  Eigen::MatrixXd convective_predictor(const FieldDG& v, double dt) const;

 private:
  const CompatibleOperators* ops_;
  CGConfig cg_;
  double rho_;
  int pin_ = 0;
  double h_min_ = 0.0;
  Eigen::VectorXd lap_diag_;
  Eigen::VectorXd prev_;

  // volume quadrature tables
  QuadratureRule vol_quad_;
  Eigen::MatrixXd vol_phi_;                    // nq x nloc
  std::vector<Eigen::MatrixX2d> vol_dphi_ref_; // per quad point
  // edge quadrature tables: per (element, local edge)
  struct EdgeData {
    int nb_elem = -1;
    Eigen::Vector2d normal;
    std::vector<double> wlen;
    Eigen::MatrixXd phi_own;  // g x nloc
    Eigen::MatrixXd phi_nb;   // g x nloc
  };
  std::vector<std::array<EdgeData, 3>> edges_;
};

}  // namespace compatdg
