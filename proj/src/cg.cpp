#include "compatdg/cg.hpp"

#include <cmath>

namespace compatdg {

CGResult cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                  const Eigen::VectorXd& b, Eigen::VectorXd& x, const CGConfig& cfg,
                  const Eigen::VectorXd* diag) {
  CGResult res;
  const int n = static_cast<int>(b.size());
  const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : 20 * n;
  const bool jacobi = cfg.precond == CGConfig::Precond::jacobi && diag != nullptr;
  const double target = std::max(cfg.rel_tol * b.norm(), cfg.abs_tol);

  Eigen::VectorXd r = b - apply(x);
  Eigen::VectorXd z = jacobi ? (r.array() / diag->array()).matrix() : r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  res.residual = r.norm();
  if (res.residual <= target) {
    res.converged = true;
    return res;
  }
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd ap = apply(p);
    double pap = p.dot(ap);
    if (!std::isfinite(pap) || pap <= 0.0) {
      res.nan_detected = !std::isfinite(pap);
      break;
    }
    double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    res.iterations = it + 1;
    res.residual = r.norm();
    if (!std::isfinite(res.residual)) {
      res.nan_detected = true;
      break;
    }
    if (res.residual <= target) {
      res.converged = true;
      break;
    }
    z = jacobi ? (r.array() / diag->array()).matrix() : r;
    double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return res;
}

}  // namespace compatdg
