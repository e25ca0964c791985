// Matrix-free preconditioned conjugate gradient for symmetric positive
// definite operator actions.

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace compatdg {

struct CGConfig {
  double rel_tol = 1e-13;
  double abs_tol = 1e-300;  // guard against a zero right-hand side
  int max_iter = 0;         // 0 selects 20 * n_unknowns
  enum class Precond { none, jacobi } precond = Precond::none;
};

struct CGResult {
  int iterations = 0;
  double residual = 0.0;  // final 2-norm of b - A x
  bool converged = false;
  bool nan_detected = false;
};

/// Solves A x = b with x as warm start; `apply` must be SPD on the solution
/// subspace. Uses the Jacobi preconditioner when cfg.precond requests it and
/// `diag` is non-null.
CGResult cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                  const Eigen::VectorXd& b, Eigen::VectorXd& x, const CGConfig& cfg,
                  const Eigen::VectorXd* diag = nullptr);

}  // namespace compatdg
