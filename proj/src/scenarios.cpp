#include "compatdg/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace compatdg {

FieldDG init_compatible_grad(const CompatibleOperators& ops, const ScalarFn& z, int m_out) {
  FieldFEM zh = interpolate_fem(z, ops.fem());
  FieldDG g = ops.gradient(zh);
  if (m_out == 2) return g;
  FieldDG out(ops.dg(), m_out);
  out.coeffs.leftCols(2) = g.coeffs;
  return out;
}

FieldDG init_compatible_curl(const CompatibleOperators& ops, const VectorFn& a, int m_out) {
  FieldFEM ah = interpolate_fem(a, 3, ops.fem());
  FieldDG c = ops.curl(ah);
  if (m_out == 3) return c;
  FieldDG out(ops.dg(), m_out);
  out.coeffs = c.coeffs.leftCols(m_out);
  return out;
}

Eigen::VectorXd exact_solution(const std::string& name, const Eigen::Vector2d& x, double t) {
  if (name == "tgv2d") {
    Eigen::VectorXd u(3);
    u << std::sin(x.x()) * std::cos(x.y()), -std::cos(x.x()) * std::sin(x.y()),
        -0.5 + 0.25 * (std::cos(2.0 * x.x()) + std::cos(2.0 * x.y()));
    return u;
  }
  if (name == "mm_planewave") {
    // planar wave along (1,1,0)/sqrt(2) with unit speeds; one period is sqrt(2)
    const double b = std::sqrt(2.0) / 2.0;
    const double s = std::sin(M_PI * (x.x() - x.y()) - std::sqrt(2.0) * M_PI * t);
    Eigen::VectorXd u(8);
    u << 0.25 * b * s, -0.25 * b * s, 1.0 * s,  // B
        0.25 * s,                               // p
        1.5 * b * s, 0.5 * b * s, 0.0,          // E
        0.5 * s;                                // q
    return u;
  }
  if (name == "acoustic_planewave") {
    const double lambda = 0.25;
    const double s = std::sin(2.0 * M_PI * (x.x() - t) / lambda);
    Eigen::VectorXd u(3);
    u << s, s, 0.0;  // p, v1, v2
    return u;
  }
  throw std::invalid_argument("exact_solution: unknown name '" + name + "'");
}

System system_from_name(const std::string& name) {
  if (name == "acoustics") return System::acoustics;
  if (name == "maxwell") return System::maxwell;
  if (name == "maxwellglm") return System::maxwellglm;
  if (name == "euler") return System::euler;
  throw std::invalid_argument("unknown system '" + name + "'");
}

std::string system_name(System s) {
  switch (s) {
    case System::acoustics: return "acoustics";
    case System::maxwell: return "maxwell";
    case System::maxwellglm: return "maxwellglm";
    case System::euler: return "euler";
  }
  return "?";
}

namespace {

template <typename Gather>
double quad_energy(const SimplexMesh& mesh, const ReferenceElement& ref, int exactness,
                   const Gather& local_values) {
  QuadratureRule quad = triangle_quadrature(exactness);
  const int nq = quad.size();
  Eigen::MatrixXd basis(nq, ref.node_count());
  for (int q = 0; q < nq; ++q) basis.row(q) = ref.basis_at(quad.points[q]).transpose();
  double total = 0.0;
  Eigen::MatrixXd loc;
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    local_values(e, loc);
    const double adet = 2.0 * std::abs(mesh.signed_area(e));
    for (int q = 0; q < nq; ++q) {
      Eigen::VectorXd val = loc.transpose() * basis.row(q).transpose();
      total += 0.5 * quad.weights[q] * adet * val.squaredNorm();
    }
  }
  return total;
}

}  // namespace

double field_energy(const FieldDG& w) {
  const DGSpace& s = *w.space;
  return quad_energy(s.mesh(), s.ref(), 2 * s.degree(),
                     [&](int e, Eigen::MatrixXd& loc) {
                       loc = w.coeffs.middleRows(s.offset(e), s.local_dofs());
                     });
}

double field_energy(const FieldFEM& w) {
  const FEMSpace& s = *w.space;
  return quad_energy(s.mesh(), s.ref(), 2 * s.degree(),
                     [&](int e, Eigen::MatrixXd& loc) {
                       loc.resize(s.local_dofs(), w.components());
                       for (int l = 0; l < s.local_dofs(); ++l)
                         loc.row(l) = w.values.row(s.global_dof(e, l));
                     });
}

double energy(const State& s, double rho) {
  switch (s.system) {
    case System::acoustics:
      return field_energy(s.dg_vec) + field_energy(s.fem_scal);
    case System::maxwell:
      return field_energy(s.dg_vec) + field_energy(s.fem_vec);
    case System::maxwellglm:
      return field_energy(s.dg_vec) + field_energy(s.dg_scal) + field_energy(s.fem_vec) +
             field_energy(s.fem_scal);
    case System::euler:
      return rho * field_energy(s.dg_vec);
  }
  return 0.0;
}

InvolutionErrors involution_errors(const CompatibleOperators& ops, const FieldDG& w) {
  if (w.components() < 2)
    throw std::invalid_argument("involution_errors: need at least two components");
  InvolutionErrors err;
  err.eps_d = ops.div_dg(w.coeffs).lpNorm<Eigen::Infinity>();
  if (w.components() == 2) {
    // in-plane field: the curl has only the z row
    Eigen::MatrixXd w3 = Eigen::MatrixXd::Zero(w.coeffs.rows(), 3);
    w3.leftCols(2) = w.coeffs;
    err.eps_c = ops.curl_dg(w3).col(2).lpNorm<Eigen::Infinity>();
  } else {
    err.eps_c = ops.curl_dg(w.coeffs).lpNorm<Eigen::Infinity>();
  }
  return err;
}

namespace {

template <typename EvalLocal>
Eigen::VectorXd quad_l2_error(const SimplexMesh& mesh, const DGSpace* dg,
                              const FEMSpace* fem, int m, const VectorFn& exact,
                              const EvalLocal& eval_local) {
  const ReferenceElement& ref = dg ? dg->ref() : fem->ref();
  const int degree = ref.degree();
  QuadratureRule quad = triangle_quadrature(2 * (degree + 2));
  const int nq = quad.size();
  Eigen::MatrixXd basis(nq, ref.node_count());
  for (int q = 0; q < nq; ++q) basis.row(q) = ref.basis_at(quad.points[q]).transpose();

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd loc;
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    eval_local(e, loc);
    const AffineMap& map = dg ? dg->map(e) : fem->map(e);
    const double adet = std::abs(map.det);
    for (int q = 0; q < nq; ++q) {
      Eigen::VectorXd val = loc.transpose() * basis.row(q).transpose();
      Eigen::VectorXd ex = exact(map.to_physical(quad.points[q]));
      acc += quad.weights[q] * adet * (val - ex.head(m)).array().square().matrix();
    }
  }
  return acc.array().sqrt();
}

}  // namespace

Eigen::VectorXd l2_error(const FieldDG& f, const VectorFn& exact) {
  const DGSpace& s = *f.space;
  return quad_l2_error(s.mesh(), &s, nullptr, f.components(), exact,
                       [&](int e, Eigen::MatrixXd& loc) {
                         loc = f.coeffs.middleRows(s.offset(e), s.local_dofs());
                       });
}

Eigen::VectorXd l2_error(const FieldFEM& f, const VectorFn& exact) {
  const FEMSpace& s = *f.space;
  return quad_l2_error(s.mesh(), nullptr, &s, f.components(), exact,
                       [&](int e, Eigen::MatrixXd& loc) {
                         loc.resize(s.local_dofs(), f.components());
                         for (int l = 0; l < s.local_dofs(); ++l)
                           loc.row(l) = f.values.row(s.global_dof(e, l));
                       });
}

}  // namespace compatdg
