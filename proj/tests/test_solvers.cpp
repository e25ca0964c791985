#include <doctest.h>

#include "compatdg/cg.hpp"
#include "compatdg/rng.hpp"
#include "compatdg/scenarios.hpp"
#include "compatdg/steppers.hpp"
#include "support.hpp"

using namespace compatdg;

TEST_CASE("cg: identity operator converges in one iteration") {
  Eigen::VectorXd b(5);
  b << 1, -2, 3, 0.5, 4;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(5);
  CGResult r = cg_solve([](const Eigen::VectorXd& v) { return v; }, b, x, CGConfig{});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK((x - b).norm() <= 1e-14);
}

TEST_CASE("cg: recovers a known solution of the FEM mass system") {
  SimplexMesh m = SimplexMesh::generate_structured(2, 2, {0, 1, 0, 1}, true);
  DGSpace dg(m, 1);
  FEMSpace fem(m, 2);
  CompatibleOperators ops(dg, fem);
  SplitMix64 rng(7);
  Eigen::VectorXd xstar(fem.total_dofs());
  for (int i = 0; i < xstar.size(); ++i) xstar(i) = rng.uniform(-1, 1);
  Eigen::VectorXd b = ops.mass_fem() * xstar;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(xstar.size());
  CGConfig cfg;
  cfg.rel_tol = 1e-14;
  CGResult r = cg_solve([&](const Eigen::VectorXd& v) { return (ops.mass_fem() * v).eval(); },
                        b, x, cfg);
  CHECK(r.converged);
  CHECK((x - xstar).lpNorm<Eigen::Infinity>() <= 1e-11);
}

TEST_CASE("cg: acoustics schur system converges, jacobi included") {
  SimplexMesh m = SimplexMesh::generate_structured(8, 8, {-0.5, 0.5, -0.5, 0.5}, true);
  DGSpace dg(m, 2);
  FEMSpace fem(m, 3);
  CompatibleOperators ops(dg, fem);
  SplitMix64 rng(11);
  Eigen::VectorXd b(fem.total_dofs());
  for (int i = 0; i < b.size(); ++i) b(i) = rng.uniform(-1, 1);
  const double dt = 0.01;
  auto apply = [&](const Eigen::VectorXd& v) { return ops.schur_apply_scalar(v, dt); };
  for (auto pre : {CGConfig::Precond::none, CGConfig::Precond::jacobi}) {
    CGConfig cfg;
    cfg.precond = pre;
    Eigen::VectorXd diag = ops.schur_scalar_diagonal(dt);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    CGResult r = cg_solve(apply, b, x, cfg, &diag);
    CHECK(r.converged);
    CHECK(r.iterations > 0);
    CHECK((b - apply(x)).norm() <= cfg.rel_tol * b.norm() * 1.001);
  }
}

TEST_CASE("cg: error decreases monotonically in the A-norm") {
  SplitMix64 rng(13);
  const int n = 30;
  Eigen::MatrixXd base(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) base(i, j) = rng.uniform(-1, 1);
  Eigen::MatrixXd a = base * base.transpose() + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd xstar(n);
  for (int i = 0; i < n; ++i) xstar(i) = rng.uniform(-1, 1);
  Eigen::VectorXd b = a * xstar;
  auto apply = [&](const Eigen::VectorXd& v) { return (a * v).eval(); };
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= n; ++k) {
    CGConfig cfg;
    cfg.max_iter = k;
    cfg.rel_tol = 1e-16;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    cg_solve(apply, b, x, cfg);
    double err = std::sqrt((x - xstar).dot(a * (x - xstar)));
    CHECK(err <= prev * (1.0 + 1e-12) + 1e-12);
    prev = err;
  }
}

TEST_CASE("cg: failure reporting") {
  SUBCASE("max_iter exceeded returns the best iterate with converged=false") {
    SplitMix64 rng(17);
    const int n = 40;
    Eigen::MatrixXd base(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) base(i, j) = rng.uniform(-1, 1);
    Eigen::MatrixXd a = base * base.transpose() + 1e-6 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    CGConfig cfg;
    cfg.max_iter = 2;
    cfg.rel_tol = 1e-15;
    CGResult r = cg_solve([&](const Eigen::VectorXd& v) { return (a * v).eval(); }, b, x, cfg);
    CHECK(!r.converged);
    CHECK(r.iterations == 2);
  }
  SUBCASE("NaN in the operator is detected") {
    Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    CGResult r = cg_solve(
        [](const Eigen::VectorXd& v) {
          return (v * std::numeric_limits<double>::quiet_NaN()).eval();
        },
        b, x, CGConfig{});
    CHECK(r.nan_detected);
    CHECK(!r.converged);
  }
}

namespace {

struct AcousticsRig {
  SimplexMesh mesh;
  DGSpace dg;
  FEMSpace fem;
  CompatibleOperators ops;
  AcousticsRig(int nxy, int degree, const BoundingBox& box = {-0.5, 0.5, -0.5, 0.5})
      : mesh(SimplexMesh::generate_structured(nxy, nxy, box, true)),
        dg(mesh, degree),
        fem(mesh, degree + 1),
        ops(dg, fem) {}
};

double acoustics_energy(const FieldDG& v, const FieldFEM& p) {
  return field_energy(v) + field_energy(p);
}

}  // namespace

TEST_CASE("acoustics: constant pressure and zero velocity is a steady state") {
  AcousticsRig rig(4, 1);
  FieldDG v(rig.dg, 2);
  FieldFEM p(rig.fem, 1);
  p.values.setConstant(2.5);
  AcousticsStepper stepper(rig.ops, CGConfig{});
  stepper.step(v, p, 0.01);
  CHECK((p.values.array() - 2.5).abs().maxCoeff() <= 1e-13);
  CHECK(v.coeffs.lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("acoustics: per-step energy conservation from a gaussian pulse") {
  AcousticsRig rig(8, 2);
  FieldDG v(rig.dg, 2);
  FieldFEM p = interpolate_fem(
      [](const Eigen::Vector2d& x) { return std::exp(-0.5 * x.squaredNorm() / 0.01); },
      rig.fem);
  AcousticsStepper stepper(rig.ops, CGConfig{});
  double e0 = acoustics_energy(v, p);
  for (int s = 0; s < 20; ++s) {
    double before = acoustics_energy(v, p);
    stepper.step(v, p, 0.01);
    double after = acoustics_energy(v, p);
    CHECK(std::abs(after - before) <= 10 * 1e-13 * e0 + 1e-15);
  }
}

TEST_CASE("acoustics: curl functional stays at machine precision over 1000 steps") {
  AcousticsRig rig(6, 1);
  const double lambda = 0.25;
  FieldDG v = init_compatible_grad(rig.ops, [&](const Eigen::Vector2d& x) {
    return -lambda / (2 * M_PI) * std::cos(2 * M_PI * x.x() / lambda);
  });
  FieldFEM p = interpolate_fem(
      [&](const Eigen::Vector2d& x) { return std::sin(2 * M_PI * x.x() / lambda); },
      rig.fem);
  AcousticsStepper stepper(rig.ops, CGConfig{});
  CHECK(involution_errors(rig.ops, v).eps_c <= 1e-12);
  for (int s = 0; s < 1000; ++s) stepper.step(v, p, 0.005);
  CHECK(involution_errors(rig.ops, v).eps_c <= 1e-12);
}

TEST_CASE("maxwell: zero state is unchanged and energy is conserved") {
  AcousticsRig rig(6, 1);
  MaxwellStepper stepper(rig.ops, CGConfig{});

  FieldDG b(rig.dg, 3);
  FieldFEM e(rig.fem, 3);
  stepper.step(b, e, 0.01);
  CHECK(b.coeffs.lpNorm<Eigen::Infinity>() <= 1e-15);
  CHECK(e.values.lpNorm<Eigen::Infinity>() <= 1e-15);

  e = interpolate_fem(
      [](const Eigen::Vector2d& x) {
        Eigen::VectorXd v(3);
        v << 0, 0, std::exp(-0.5 * x.squaredNorm() / 0.01);
        return v;
      },
      3, rig.fem);
  double e0 = field_energy(b) + field_energy(e);
  for (int s = 0; s < 20; ++s) {
    double before = field_energy(b) + field_energy(e);
    stepper.step(b, e, 0.01);
    double after = field_energy(b) + field_energy(e);
    CHECK(std::abs(after - before) <= 10 * 1e-13 * e0 + 1e-15);
  }
}

TEST_CASE("maxwell: divergence functional invariant for compatible B over 1000 steps") {
  AcousticsRig rig(6, 1);
  SplitMix64 rng(1709);
  FieldDG b = init_compatible_curl(rig.ops, [&](const Eigen::Vector2d& x) {
    Eigen::VectorXd a(3);
    a << std::sin(2 * M_PI * x.x()) * 0.1, std::cos(2 * M_PI * x.y()) * 0.1,
        std::sin(2 * M_PI * (x.x() + x.y()));
    return a;
  });
  FieldFEM e = interpolate_fem(
      [](const Eigen::Vector2d& x) {
        Eigen::VectorXd v(3);
        v << 0, 0, std::exp(-0.5 * x.squaredNorm() / 0.01);
        return v;
      },
      3, rig.fem);
  MaxwellStepper stepper(rig.ops, CGConfig{});
  CHECK(involution_errors(rig.ops, b).eps_d <= 1e-12);
  for (int s = 0; s < 1000; ++s) stepper.step(b, e, 0.005);
  CHECK(involution_errors(rig.ops, b).eps_d <= 1e-12);
}

TEST_CASE("maxwell-glm: zero state unchanged, energy conserved, involutions hold") {
  AcousticsRig rig(6, 1);
  MaxwellGLMStepper stepper(rig.ops, CGConfig{});

  FieldDG b(rig.dg, 3), q(rig.dg, 1);
  FieldFEM e(rig.fem, 3), p(rig.fem, 1);
  stepper.step(b, q, e, p, 0.01);
  CHECK(b.coeffs.lpNorm<Eigen::Infinity>() <= 1e-15);
  CHECK(q.coeffs.lpNorm<Eigen::Infinity>() <= 1e-15);
  CHECK(e.values.lpNorm<Eigen::Infinity>() <= 1e-15);
  CHECK(p.values.lpNorm<Eigen::Infinity>() <= 1e-15);

  auto gaussian = [](const Eigen::Vector2d& x) {
    return std::exp(-0.5 * x.squaredNorm() / 0.01);
  };

  SUBCASE("T1: maxwell-type data keeps div B at machine precision") {
    e = interpolate_fem(
        [&](const Eigen::Vector2d& x) {
          Eigen::VectorXd v(3);
          v << 0, 0, gaussian(x);
          return v;
        },
        3, rig.fem);
    double e0 = field_energy(b) + field_energy(q) + field_energy(e) + field_energy(p);
    for (int s = 0; s < 200; ++s) {
      double before = field_energy(b) + field_energy(q) + field_energy(e) + field_energy(p);
      stepper.step(b, q, e, p, 0.01);
      double after = field_energy(b) + field_energy(q) + field_energy(e) + field_energy(p);
      CHECK(std::abs(after - before) <= 10 * 1e-13 * e0 + 1e-15);
      CHECK(involution_errors(rig.ops, b).eps_d <= 1e-12);
    }
  }

  SUBCASE("T2: acoustic-type data keeps curl B at machine precision") {
    p = interpolate_fem(gaussian, rig.fem);
    for (int s = 0; s < 200; ++s) {
      stepper.step(b, q, e, p, 0.01);
      CHECK(involution_errors(rig.ops, b).eps_c <= 1e-12);
    }
  }
}

TEST_CASE("euler: zero velocity is steady") {
  AcousticsRig rig(4, 1, {0, 2 * M_PI, 0, 2 * M_PI});
  EulerStepper stepper(rig.ops, CGConfig{}, 1.0, {0, 0});
  FieldDG v(rig.dg, 2);
  FieldFEM p(rig.fem, 1);
  stepper.step(v, p, 0.01);
  CHECK(v.coeffs.lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK(p.values.lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("euler: oversized time step raises the CFL warning") {
  AcousticsRig rig(4, 2, {0, 2 * M_PI, 0, 2 * M_PI});
  FieldDG v = init_compatible_curl(
      rig.ops,
      [](const Eigen::Vector2d& x) {
        Eigen::VectorXd a(3);
        a << 0, 0, std::sin(x.x()) * std::sin(x.y());
        return a;
      },
      2);
  FieldFEM p(rig.fem, 1);
  EulerStepper stepper(rig.ops, CGConfig{}, 1.0, {0, 0});
  StepReport ok = stepper.step(v, p, 1e-3);
  CHECK(!ok.cfl_warning);
  StepReport warned = stepper.step(v, p, 10.0);
  CHECK(warned.cfl_warning);
}

TEST_CASE("euler: projection makes the dual divergence vanish and dissipates energy") {
  AcousticsRig rig(8, 2, {0, 2 * M_PI, 0, 2 * M_PI});
  FieldDG v = init_compatible_curl(
      rig.ops,
      [](const Eigen::Vector2d& x) {
        Eigen::VectorXd a(3);
        a << 0, 0, std::sin(x.x()) * std::sin(x.y());
        return a;
      },
      2);
  FieldFEM p = interpolate_fem(
      [](const Eigen::Vector2d& x) { return exact_solution("tgv2d", x, 0)(2); }, rig.fem);
  CGConfig cgc;
  cgc.rel_tol = 1e-13;
  EulerStepper stepper(rig.ops, cgc, 1.0, {0, 0});
  const double dt = 0.01;
  for (int s = 0; s < 10; ++s) {
    FieldDG vstar_field(rig.dg, 2);
    vstar_field.coeffs = stepper.convective_predictor(v, dt);
    stepper.step(v, p, dt);
    double ke_after = field_energy(v);
    double ke_star = field_energy(vstar_field);
    CHECK(ke_after <= ke_star + 1e-12);
    CHECK(rig.ops.weak_div_rhs(v.coeffs).lpNorm<Eigen::Infinity>() <= 1e-11);
  }
  CHECK(p.values(stepper.pinned_dof(), 0) == 0.0);
}
