#include "compatdg/steppers.hpp"

#include <chrono>
#include <iostream>
#include <limits>

namespace compatdg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

void check(const CGResult& r, const char* what) {
  if (r.nan_detected) throw CGFailure(std::string(what) + ": NaN detected in CG");
  if (!r.converged)
    throw CGFailure(std::string(what) + ": CG did not converge, residual " +
                    std::to_string(r.residual));
}

}  // namespace

// ---------------------------------------------------------------- acoustics

AcousticsStepper::AcousticsStepper(const CompatibleOperators& ops, const CGConfig& cg)
    : ops_(&ops), cg_(cg) {}

StepReport AcousticsStepper::step(FieldDG& v, FieldFEM& p, double dt) {
  auto t0 = Clock::now();
  StepReport rep;
  if (cg_.precond == CGConfig::Precond::jacobi && diag_dt_ != dt) {
    diag_ = ops_->schur_scalar_diagonal(dt);
    diag_dt_ = dt;
  }
  Eigen::VectorXd pn = p.values.col(0);
  Eigen::VectorXd rhs = ops_->apply_mass_fem(pn) + dt * ops_->div_dg(v.coeffs) -
                        (0.25 * dt * dt) * ops_->weak_laplacian(pn);
  // warm start: linear extrapolation from the previous two solutions
  Eigen::VectorXd pnew = prev_.size() == pn.size() ? (2.0 * pn - prev_).eval() : pn;
  auto apply = [&](const Eigen::VectorXd& x) { return ops_->schur_apply_scalar(x, dt); };
  CGResult cgr = cg_solve(apply, rhs, pnew, cg_, diag_ ? &*diag_ : nullptr);
  check(cgr, "acoustics");

  Eigen::VectorXd phalf = 0.5 * (pn + pnew);
  Eigen::MatrixXd g = ops_->grad_fem(phalf);
  ops_->solve_mass_dg(g);
  v.coeffs -= dt * g;
  p.values.col(0) = pnew;
  prev_ = pn;

  rep.cg_iterations = cgr.iterations;
  rep.residual = cgr.residual;
  rep.wall_time = seconds_since(t0);
  return rep;
}

// ------------------------------------------------------------------ maxwell

MaxwellStepper::MaxwellStepper(const CompatibleOperators& ops, const CGConfig& cg)
    : ops_(&ops), cg_(cg) {}

StepReport MaxwellStepper::step(FieldDG& b, FieldFEM& e, double dt) {
  auto t0 = Clock::now();
  StepReport rep;
  if (cg_.precond == CGConfig::Precond::jacobi && diag_dt_ != dt) {
    diag_ = ops_->schur_vector_diagonal(dt, false);
    diag_dt_ = dt;
  }
  const Eigen::MatrixXd en = e.values;
  Eigen::MatrixXd cc = ops_->curl_fem(en);
  ops_->solve_mass_dg(cc);
  Eigen::MatrixXd rhs = ops_->apply_mass_fem(en) - dt * ops_->curl_dg(b.coeffs) +
                        (0.25 * dt * dt) * ops_->curl_dg(cc);

  Eigen::VectorXd x = flatten(en);
  if (prev_.size() == x.size()) x = 2.0 * x - prev_;
  Eigen::VectorXd diag_flat;
  if (diag_) diag_flat = flatten(*diag_);
  auto apply = [&](const Eigen::VectorXd& xv) {
    return flatten(ops_->schur_apply_vector(unflatten(xv, en.rows(), 3), dt, false));
  };
  CGResult cgr = cg_solve(apply, flatten(rhs), x, cg_, diag_ ? &diag_flat : nullptr);
  check(cgr, "maxwell");
  Eigen::MatrixXd enew = unflatten(x, en.rows(), 3);

  Eigen::MatrixXd chalf = ops_->curl_fem(0.5 * (en + enew));
  ops_->solve_mass_dg(chalf);
  b.coeffs -= dt * chalf;
  e.values = enew;
  prev_ = flatten(en);

  rep.cg_iterations = cgr.iterations;
  rep.residual = cgr.residual;
  rep.wall_time = seconds_since(t0);
  return rep;
}

// -------------------------------------------------------------- maxwell-glm

MaxwellGLMStepper::MaxwellGLMStepper(const CompatibleOperators& ops, const CGConfig& cg)
    : ops_(&ops), cg_(cg) {}

StepReport MaxwellGLMStepper::step(FieldDG& b, FieldDG& q, FieldFEM& e, FieldFEM& p,
                                   double dt) {
  auto t0 = Clock::now();
  StepReport rep;
  if (cg_.precond == CGConfig::Precond::jacobi && diag_dt_ != dt) {
    diag_s_ = ops_->schur_scalar_diagonal(dt);
    diag_v_ = ops_->schur_vector_diagonal(dt, true);
    diag_dt_ = dt;
  }
  const Eigen::VectorXd pn = p.values.col(0);
  const Eigen::VectorXd qn = q.coeffs.col(0);
  const Eigen::MatrixXd en = e.values;

  // scalar wave system for p
  Eigen::VectorXd rhs_p = ops_->apply_mass_fem(pn) + dt * ops_->div_dg(b.coeffs) -
                          (0.25 * dt * dt) * ops_->weak_laplacian(pn);
  Eigen::VectorXd pnew = prev_p_.size() == pn.size() ? (2.0 * pn - prev_p_).eval() : pn;
  auto apply_s = [&](const Eigen::VectorXd& x) { return ops_->schur_apply_scalar(x, dt); };
  CGResult cgs = cg_solve(apply_s, rhs_p, pnew, cg_, diag_s_ ? &*diag_s_ : nullptr);
  check(cgs, "maxwell-glm scalar");

  // vector wave system for E
  Eigen::MatrixXd cc = ops_->curl_fem(en);
  ops_->solve_mass_dg(cc);
  Eigen::MatrixXd dd = ops_->div_fem(en);
  ops_->solve_mass_dg(dd);
  Eigen::MatrixXd rhs_e = ops_->apply_mass_fem(en) - dt * ops_->curl_dg(b.coeffs) +
                          (0.25 * dt * dt) * ops_->curl_dg(cc) + dt * ops_->grad_dg(qn, 3) -
                          (0.25 * dt * dt) * ops_->grad_dg(dd.col(0), 3);
  Eigen::VectorXd x = flatten(en);
  if (prev_e_.size() == x.size()) x = 2.0 * x - prev_e_;
  Eigen::VectorXd diag_flat;
  if (diag_v_) diag_flat = flatten(*diag_v_);
  auto apply_v = [&](const Eigen::VectorXd& xv) {
    return flatten(ops_->schur_apply_vector(unflatten(xv, en.rows(), 3), dt, true));
  };
  CGResult cgv = cg_solve(apply_v, flatten(rhs_e), x, cg_, diag_v_ ? &diag_flat : nullptr);
  check(cgv, "maxwell-glm vector");
  Eigen::MatrixXd enew = unflatten(x, en.rows(), 3);

  // explicit DG updates from the midpoint fields
  Eigen::MatrixXd ehalf = 0.5 * (en + enew);
  Eigen::VectorXd phalf = 0.5 * (pn + pnew);
  Eigen::MatrixXd db = ops_->curl_fem(ehalf);
  Eigen::MatrixXd gp = ops_->grad_fem(phalf);
  db.col(0) += gp.col(0);
  db.col(1) += gp.col(1);
  ops_->solve_mass_dg(db);
  b.coeffs -= dt * db;

  Eigen::MatrixXd dq = ops_->div_fem(ehalf);
  ops_->solve_mass_dg(dq);
  q.coeffs.col(0) -= dt * dq.col(0);

  prev_e_ = flatten(en);
  prev_p_ = pn;
  e.values = enew;
  p.values.col(0) = pnew;

  rep.cg_iterations = cgs.iterations + cgv.iterations;
  rep.residual = std::max(cgs.residual, cgv.residual);
  rep.wall_time = seconds_since(t0);
  return rep;
}

// -------------------------------------------------------------------- euler

EulerStepper::EulerStepper(const CompatibleOperators& ops, const CGConfig& cg, double rho,
                           const Eigen::Vector2d& pin_point)
    : ops_(&ops), cg_(cg), rho_(rho) {
  const DGSpace& dg = ops.dg();
  const FEMSpace& fem = ops.fem();
  const SimplexMesh& mesh = dg.mesh();
  const int n = dg.degree();

  double best = std::numeric_limits<double>::max();
  for (int d = 0; d < fem.total_dofs(); ++d) {
    double dist = (fem.node(d) - pin_point).norm();
    if (dist < best) {
      best = dist;
      pin_ = d;
    }
  }
  lap_diag_ = ops.laplacian_diagonal();
  lap_diag_(pin_) = 1.0;
  h_min_ = quality(mesh).h_min;

  vol_quad_ = triangle_quadrature(3 * (n + 1));
  const int nq = vol_quad_.size();
  const int nloc = dg.local_dofs();
  vol_phi_.resize(nq, nloc);
  vol_dphi_ref_.resize(nq);
  for (int qi = 0; qi < nq; ++qi) {
    vol_phi_.row(qi) = dg.ref().basis_at(vol_quad_.points[qi]).transpose();
    vol_dphi_ref_[qi] = dg.ref().grad_basis_at(vol_quad_.points[qi]);
  }

  // Edge Gauss data; matched neighbor points are located geometrically
  // (periodic shift included) through the inverse affine map.
  Connectivity conn = build_connectivity(mesh);
  const int g = (3 * n + 3) / 2 + 1;  // exact to degree 3N+2 on edges
  std::array<EdgeTrace, 3> traces = {trace_points(0, g), trace_points(1, g),
                                     trace_points(2, g)};
  edges_.resize(mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int le = 0; le < 3; ++le) {
      EdgeData& ed = edges_[t][le];
      ed.nb_elem = conn.neighbor[t][le];
      if (ed.nb_elem < 0)
        throw std::runtime_error("euler: non-periodic boundary edges are not supported");
      Eigen::Vector2d a = mesh.vertex(tri[le]);
      Eigen::Vector2d bb = mesh.vertex(tri[(le + 1) % 3]);
      Eigen::Vector2d tang = bb - a;
      double len = tang.norm();
      ed.normal = Eigen::Vector2d(tang.y(), -tang.x()) / len;
      ed.wlen.resize(g);
      ed.phi_own.resize(g, nloc);
      ed.phi_nb.resize(g, nloc);
      const AffineMap& nb_map = dg.map(ed.nb_elem);
      for (int k = 0; k < g; ++k) {
        ed.wlen[k] = traces[le].weights[k] * len;
        ed.phi_own.row(k) = dg.ref().basis_at(traces[le].points[k]).transpose();
        Eigen::Vector2d x =
            dg.map(t).to_physical(traces[le].points[k]) + conn.shift[t][le];
        ed.phi_nb.row(k) = dg.ref().basis_at(nb_map.to_reference(x)).transpose();
      }
    }
  }
}

Eigen::MatrixXd EulerStepper::convective_predictor(const FieldDG& v, double dt) const {
  const DGSpace& dg = ops_->dg();
  const int ne = dg.mesh().n_triangles();
  const int nloc = dg.local_dofs();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dg.total_dofs(), 2);

  for (int e = 0; e < ne; ++e) {
    const auto vloc = v.coeffs.middleRows(e * nloc, nloc);
    auto out = rhs.middleRows(e * nloc, nloc);
    // volume: int grad(phi_i) . (v (x) v)
    const AffineMap& map = dg.map(e);
    const double adet = std::abs(map.det);
    for (int qi = 0; qi < vol_quad_.size(); ++qi) {
      Eigen::Vector2d vq = vloc.transpose() * vol_phi_.row(qi).transpose();
      Eigen::Matrix<double, Eigen::Dynamic, 2> dphi =
          vol_dphi_ref_[qi] * map.inv_jac_t.transpose();
      double w = vol_quad_.weights[qi] * adet;
      Eigen::VectorXd gv = dphi * vq;  // grad(phi_i) . v  per i
      out.col(0) += (w * vq.x()) * gv;
      out.col(1) += (w * vq.y()) * gv;
    }
    // edges: Ducros flux with upwind dissipation on the normal-velocity jump
    for (int le = 0; le < 3; ++le) {
      const EdgeData& ed = edges_[e][le];
      const auto vnb = v.coeffs.middleRows(ed.nb_elem * nloc, nloc);
      for (size_t k = 0; k < ed.wlen.size(); ++k) {
        Eigen::Vector2d vm = vloc.transpose() * ed.phi_own.row(k).transpose();
        Eigen::Vector2d vp = vnb.transpose() * ed.phi_nb.row(k).transpose();
        Eigen::Vector2d avg = 0.5 * (vm + vp);
        double vn = avg.dot(ed.normal);
        Eigen::Vector2d flux = vn * avg - 0.5 * std::abs(vn) * (vp - vm);
        out.col(0) -= (ed.wlen[k] * flux.x()) * ed.phi_own.row(k).transpose();
        out.col(1) -= (ed.wlen[k] * flux.y()) * ed.phi_own.row(k).transpose();
      }
    }
  }
  ops_->solve_mass_dg(rhs);
  return v.coeffs + dt * rhs;
}

StepReport EulerStepper::step(FieldDG& v, FieldFEM& p, double dt) {
  auto t0 = Clock::now();
  StepReport rep;
  const int n = ops_->dg().degree();

  double vmax = v.coeffs.rowwise().norm().maxCoeff();
  if (vmax > 0.0 && dt > h_min_ / (vmax * (2.0 * n + 1.0))) {
    rep.cfl_warning = true;
    std::cerr << "euler: dt " << dt << " exceeds CFL limit "
              << h_min_ / (vmax * (2.0 * n + 1.0)) << "\n";
  }

  Eigen::MatrixXd vstar = convective_predictor(v, dt);

  Eigen::VectorXd rhs = (rho_ / dt) * ops_->div_dg(vstar);
  rhs(pin_) = 0.0;
  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd xp = x;
    xp(pin_) = 0.0;
    Eigen::VectorXd y = ops_->weak_laplacian(xp);
    y(pin_) = x(pin_);
    return y;
  };
  Eigen::VectorXd pn = p.values.col(0);
  Eigen::VectorXd pnew = prev_.size() == pn.size() ? (2.0 * pn - prev_).eval() : pn;
  pnew(pin_) = 0.0;
  const Eigen::VectorXd* diag =
      cg_.precond == CGConfig::Precond::jacobi ? &lap_diag_ : nullptr;
  CGResult cgr = cg_solve(apply, rhs, pnew, cg_, diag);
  check(cgr, "euler pressure");

  Eigen::MatrixXd g = ops_->grad_fem(pnew);
  ops_->solve_mass_dg(g);
  v.coeffs = vstar - (dt / rho_) * g;
  prev_ = pn;
  p.values.col(0) = pnew;

  rep.cg_iterations = cgr.iterations;
  rep.residual = cgr.residual;
  rep.wall_time = seconds_since(t0);
  return rep;
}

}  // namespace compatdg
