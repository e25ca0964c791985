#include "compatdg/spaces.hpp"

#include <cmath>
#include <unordered_map>

#include "compatdg/quadrature.hpp"

namespace compatdg {

namespace {

std::vector<AffineMap> element_maps(const SimplexMesh& mesh) {
  std::vector<AffineMap> maps;
  maps.reserve(mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    maps.push_back(affine_map(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2])));
  }
  return maps;
}

struct CellKey {
  long long ix, iy;
  bool operator==(const CellKey& o) const { return ix == o.ix && iy == o.iy; }
};
struct CellKeyHash {
  size_t operator()(const CellKey& k) const {
    return std::hash<long long>()(k.ix * 0x9E3779B97F4A7C15LL ^ k.iy);
  }
};

}  // namespace

DGSpace::DGSpace(const SimplexMesh& mesh, int degree)
    : mesh_(&mesh), ref_(degree), maps_(element_maps(mesh)) {}

FEMSpace::FEMSpace(const SimplexMesh& mesh, int degree)
    : mesh_(&mesh), ref_(degree), maps_(element_maps(mesh)) {
  if (degree < 1) throw std::invalid_argument("FEMSpace: degree must be >= 1");
  const double tol = 1e-12 * mesh.box().size();
  const BoundingBox& box = mesh.box();
  const bool periodic = mesh.periodic();

  auto canonical = [&](Eigen::Vector2d x) {
    if (!periodic) return x;
    auto wrap = [&](double v, double lo, double len) {
      double u = (v - lo) / len;
      u -= std::floor(u);
      if (u > 1.0 - 0.5 * tol / len) u = 0.0;
      return lo + u * len;
    };
    return Eigen::Vector2d(wrap(x.x(), box.xmin, box.lx()),
                           wrap(x.y(), box.ymin, box.ly()));
  };

  std::unordered_map<CellKey, std::vector<int>, CellKeyHash> grid;
  auto key_of = [&](const Eigen::Vector2d& p) {
    return CellKey{static_cast<long long>(std::floor(p.x() / tol)),
                   static_cast<long long>(std::floor(p.y() / tol))};
  };
  auto find_or_insert = [&](const Eigen::Vector2d& p) {
    CellKey k = key_of(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(CellKey{k.ix + dx, k.iy + dy});
        if (it == grid.end()) continue;
        for (int dof : it->second)
          if ((node_coords_[dof] - p).norm() < tol) return dof;
      }
    int dof = n_global_++;
    node_coords_.push_back(p);
    grid[k].push_back(dof);
    return dof;
  };

  const int nloc = local_dofs();
  elem2global_.resize(mesh.n_triangles() * nloc);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    for (int l = 0; l < nloc; ++l) {
      Eigen::Vector2d x = canonical(maps_[t].to_physical(ref_.nodes()[l]));
      elem2global_[t * nloc + l] = find_or_insert(x);
    }
  }

  vertex_dof_.assign(mesh.n_vertices(), -1);
  auto vn = ref_.vertex_nodes();
  for (int t = 0; t < mesh.n_triangles(); ++t)
    for (int c = 0; c < 3; ++c)
      vertex_dof_[mesh.triangle(t)[c]] = elem2global_[t * nloc + vn[c]];
}

Eigen::VectorXd eval_field(const FieldDG& f, int elem, const Eigen::Vector2d& ref_pt) {
  const auto& s = *f.space;
  Eigen::VectorXd phi = s.ref().basis_at(ref_pt);
  return f.coeffs.middleRows(s.offset(elem), s.local_dofs()).transpose() * phi;
}

Eigen::VectorXd eval_field(const FieldFEM& f, int elem, const Eigen::Vector2d& ref_pt) {
  const auto& s = *f.space;
  Eigen::VectorXd psi = s.ref().basis_at(ref_pt);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.components());
  for (int l = 0; l < s.local_dofs(); ++l)
    out += psi(l) * f.values.row(s.global_dof(elem, l)).transpose();
  return out;
}

FieldFEM interpolate_fem(const std::function<double(const Eigen::Vector2d&)>& f,
                         const FEMSpace& space) {
  FieldFEM out(space, 1);
  for (int dof = 0; dof < space.total_dofs(); ++dof) out.values(dof, 0) = f(space.node(dof));
  return out;
}

FieldFEM interpolate_fem(
    const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& f, int m,
    const FEMSpace& space) {
  FieldFEM out(space, m);
  for (int dof = 0; dof < space.total_dofs(); ++dof)
    out.values.row(dof) = f(space.node(dof)).transpose();
  return out;
}

FieldDG interpolate_dg(const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& f,
                       int m, const DGSpace& space) {
  FieldDG out(space, m);
  for (int e = 0; e < space.mesh().n_triangles(); ++e)
    for (int l = 0; l < space.local_dofs(); ++l)
      out.coeffs.row(space.offset(e) + l) =
          f(space.map(e).to_physical(space.ref().nodes()[l])).transpose();
  return out;
}

FieldDG project_dg(const std::function<Eigen::VectorXd(const Eigen::Vector2d&)>& f,
                   int m, const DGSpace& space, int quad_exactness) {
  QuadratureRule quad = triangle_quadrature(quad_exactness);
  const int nloc = space.local_dofs();
  const int nq = quad.size();
  Eigen::MatrixXd phi(nq, nloc);
  for (int q = 0; q < nq; ++q) phi.row(q) = space.ref().basis_at(quad.points[q]).transpose();
  Eigen::MatrixXd mass_ref = Eigen::MatrixXd::Zero(nloc, nloc);
  for (int q = 0; q < nq; ++q)
    mass_ref += quad.weights[q] * phi.row(q).transpose() * phi.row(q);
  Eigen::LLT<Eigen::MatrixXd> llt(mass_ref);

  FieldDG out(space, m);
  Eigen::MatrixXd rhs(nloc, m);
  for (int e = 0; e < space.mesh().n_triangles(); ++e) {
    rhs.setZero();
    for (int q = 0; q < nq; ++q)
      rhs += quad.weights[q] * phi.row(q).transpose() *
             f(space.map(e).to_physical(quad.points[q])).transpose();
    out.coeffs.middleRows(space.offset(e), nloc) = llt.solve(rhs);
  }
  return out;
}

}  // namespace compatdg
