#include "compatdg/verify.hpp"

#include <sstream>

#include "compatdg/rng.hpp"
#include "compatdg/scenarios.hpp"

namespace compatdg {

namespace {

// Max absolute two-sided jump of `project(value)` over all interior and
// periodic edges, sampled at n_gauss points per edge.
template <typename Project>
double trace_jump(const DGSpace& dg, const FieldDG& w, int n_gauss, const Project& project) {
  const SimplexMesh& mesh = dg.mesh();
  Connectivity conn = build_connectivity(mesh);
  std::array<EdgeTrace, 3> traces = {trace_points(0, n_gauss), trace_points(1, n_gauss),
                                     trace_points(2, n_gauss)};
  double worst = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int le = 0; le < 3; ++le) {
      int nb = conn.neighbor[t][le];
      if (nb < 0) continue;
      Eigen::Vector2d a = mesh.vertex(tri[le]);
      Eigen::Vector2d b = mesh.vertex(tri[(le + 1) % 3]);
      Eigen::Vector2d tang = (b - a).normalized();
      Eigen::Vector2d normal(tang.y(), -tang.x());
      const AffineMap& nb_map = dg.map(nb);
      for (int k = 0; k < n_gauss; ++k) {
        Eigen::Vector2d x = dg.map(t).to_physical(traces[le].points[k]);
        Eigen::Vector2d xref_nb = nb_map.to_reference(x + conn.shift[t][le]);
        Eigen::VectorXd own = eval_field(w, t, traces[le].points[k]);
        Eigen::VectorXd other = eval_field(w, nb, xref_nb);
        worst = std::max(worst, project(own - other, tang, normal));
      }
    }
  }
  return worst;
}

}  // namespace

VerifyReport verify_operators(const CompatibleOperators& ops, std::uint64_t seed,
                              int samples) {
  const FEMSpace& fem = ops.fem();
  const DGSpace& dg = ops.dg();
  SplitMix64 rng(seed);
  VerifyReport rep;
  const int n_gauss = dg.degree() + 2;

  for (int s = 0; s < samples; ++s) {
    FieldFEM z(fem, 1);
    for (int i = 0; i < fem.total_dofs(); ++i) z.values(i, 0) = rng.uniform(0.0, 0.001);
    FieldFEM a(fem, 3);
    for (int i = 0; i < fem.total_dofs(); ++i)
      for (int m = 0; m < 3; ++m) a.values(i, m) = rng.uniform(0.0, 0.001);

    FieldDG grad = ops.gradient(z);
    FieldDG curl = ops.curl(a);

    rep.tangential_grad_jump = std::max(
        rep.tangential_grad_jump,
        trace_jump(dg, grad, n_gauss,
                   [](const Eigen::VectorXd& jump, const Eigen::Vector2d& tang,
                      const Eigen::Vector2d&) { return std::abs(jump.dot(tang)); }));
    rep.normal_curl_jump = std::max(
        rep.normal_curl_jump,
        trace_jump(dg, curl, n_gauss,
                   [](const Eigen::VectorXd& jump, const Eigen::Vector2d&,
                      const Eigen::Vector2d& normal) {
                     return std::abs(jump.head(2).dot(normal));
                   }));

    rep.curl_of_grad = std::max(rep.curl_of_grad, involution_errors(ops, grad).eps_c);
    rep.div_of_curl =
        std::max(rep.div_of_curl, ops.div_dg(curl.coeffs).lpNorm<Eigen::Infinity>());

    // mixed second derivatives commute: K_x . D^{-1} K_y^T = K_y . D^{-1} K_x^T
    Eigen::MatrixXd g = ops.grad_fem(z.values.col(0));
    ops.solve_mass_dg(g);
    Eigen::MatrixXd wx(g.rows(), 2), wy(g.rows(), 2);
    wx.col(0) = g.col(1);  // K_x . (D^{-1} K_y^T z)
    wx.col(1).setZero();
    wy.col(0).setZero();
    wy.col(1) = g.col(0);  // K_y . (D^{-1} K_x^T z)
    Eigen::VectorXd commutator = ops.div_dg(wx) - ops.div_dg(wy);
    rep.schwarz_commutator =
        std::max(rep.schwarz_commutator, commutator.lpNorm<Eigen::Infinity>());
  }
  return rep;
}

double VerifyReport::worst() const {
  return std::max({tangential_grad_jump, normal_curl_jump, curl_of_grad, div_of_curl,
                   schwarz_commutator});
}

std::string VerifyReport::formatted() const {
  std::ostringstream os;
  os.precision(8);
  os << std::scientific;
  os << "max error in the tangential components of grad Z : " << tangential_grad_jump
     << "\nmax error in the normal component of curl A     : " << normal_curl_jump
     << "\nmax |weak curl of exact gradient|               : " << curl_of_grad
     << "\nmax |weak div of exact curl|                    : " << div_of_curl
     << "\nmax |mixed-derivative commutator|               : " << schwarz_commutator
     << '\n';
  return os.str();
}

}  // namespace compatdg
