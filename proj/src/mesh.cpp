#include "compatdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace compatdg {

double SimplexMesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  Eigen::Vector2d ab = vertices_[tri[1]] - vertices_[tri[0]];
  Eigen::Vector2d ac = vertices_[tri[2]] - vertices_[tri[0]];
  return 0.5 * (ab.x() * ac.y() - ab.y() * ac.x());
}

void SimplexMesh::finalize(bool periodic) {
  periodic_ = periodic;

  for (int t = 0; t < n_triangles(); ++t) {
    if (signed_area(t) < 0.0) {
      std::cerr << "mesh: triangle " << t << " is clockwise, reorienting\n";
      std::swap(triangles_[t][1], triangles_[t][2]);
    }
    if (signed_area(t) <= 0.0)
      throw MeshError("mesh: triangle " + std::to_string(t) + " has zero area");
  }

  // Edge table keyed on the sorted vertex pair.
  std::map<std::pair<int, int>, int> lookup;
  edges_.clear();
  tri_edges_.assign(n_triangles(), {-1, -1, -1});
  for (int t = 0; t < n_triangles(); ++t) {
    const auto& tri = triangles_[t];
    for (int le = 0; le < 3; ++le) {
      int a = tri[le], b = tri[(le + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Edge e;
        e.v0 = a;
        e.v1 = b;
        e.tri[0] = t;
        e.local[0] = le;
        lookup.emplace(key, static_cast<int>(edges_.size()));
        tri_edges_[t][le] = static_cast<int>(edges_.size());
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.tri[1] >= 0)
          throw MeshError("mesh: conformity violation, edge (" + std::to_string(e.v0) +
                          "," + std::to_string(e.v1) + ") shared by more than two triangles");
        if (e.v0 != b || e.v1 != a)
          throw MeshError("mesh: conformity violation, edge (" + std::to_string(e.v0) +
                          "," + std::to_string(e.v1) +
                          ") traversed with the same orientation by both triangles");
        e.tri[1] = t;
        e.local[1] = le;
        tri_edges_[t][le] = it->second;
      }
    }
  }

  box_.xmin = box_.ymin = std::numeric_limits<double>::max();
  box_.xmax = box_.ymax = std::numeric_limits<double>::lowest();
  for (const auto& v : vertices_) {
    box_.xmin = std::min(box_.xmin, v.x());
    box_.xmax = std::max(box_.xmax, v.x());
    box_.ymin = std::min(box_.ymin, v.y());
    box_.ymax = std::max(box_.ymax, v.y());
  }

  if (!periodic) return;

  // Pair opposite boundary edges geometrically: equal length, midpoints
  // translated by one domain period.
  const double tol = 1e-12 * box_.size();
  std::vector<int> bnd;
  for (int e = 0; e < n_edges(); ++e)
    if (edges_[e].boundary()) bnd.push_back(e);
  auto mid = [&](int e) {
    return 0.5 * (vertices_[edges_[e].v0] + vertices_[edges_[e].v1]);
  };
  auto len = [&](int e) {
    return (vertices_[edges_[e].v1] - vertices_[edges_[e].v0]).norm();
  };
  const Eigen::Vector2d periods[4] = {{box_.lx(), 0.0}, {-box_.lx(), 0.0},
                                      {0.0, box_.ly()}, {0.0, -box_.ly()}};
  for (int e : bnd) {
    if (edges_[e].partner >= 0) continue;
    bool found = false;
    for (int f : bnd) {
      if (f == e || edges_[f].partner >= 0) continue;
      for (const auto& d : periods) {
        if ((mid(e) + d - mid(f)).norm() < tol && std::abs(len(e) - len(f)) < tol) {
          edges_[e].partner = f;
          edges_[e].shift = d;
          edges_[f].partner = e;
          edges_[f].shift = -d;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found)
      throw MeshError("mesh: boundary edge (" + std::to_string(edges_[e].v0) + "," +
                      std::to_string(edges_[e].v1) + ") has no periodic partner");
  }
}

SimplexMesh SimplexMesh::generate_structured(int nx, int ny, const BoundingBox& box,
                                             bool periodic) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("generate_structured: nx, ny must be positive");
  SimplexMesh m;
  m.box_ = box;
  const double dx = box.lx() / nx, dy = box.ly() / ny;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices_.emplace_back(box.xmin + i * dx, box.ymin + j * dy);
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  // Alternate the split diagonal in a checkerboard pattern.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        m.triangles_.push_back({v00, v10, v11});
        m.triangles_.push_back({v00, v11, v01});
      } else {
        m.triangles_.push_back({v00, v10, v01});
        m.triangles_.push_back({v10, v11, v01});
      }
    }
  }
  m.finalize(periodic);
  return m;
}

SimplexMesh SimplexMesh::read(const std::string& path, bool periodic) {
  std::ifstream in(path);
  if (!in) throw MeshError("mesh: cannot open '" + path + "'");
  SimplexMesh m;
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> std::string& {
    while (std::getline(in, line)) {
      ++lineno;
      auto pos = line.find('#');
      if (pos != std::string::npos) line.erase(pos);
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return line;
    }
    throw MeshError("mesh: " + path + ": unexpected end of file after line " +
                    std::to_string(lineno));
  };
  auto fail = [&](const std::string& what) -> MeshError {
    return MeshError("mesh: " + path + ":" + std::to_string(lineno) + ": " + what);
  };

  int ndim = 0, nv = 0, ne = 0;
  {
    std::istringstream hs(next_line());
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("ndim=", 0) == 0) ndim = std::stoi(tok.substr(5));
      else if (tok.rfind("nv=", 0) == 0) nv = std::stoi(tok.substr(3));
      else if (tok.rfind("ne=", 0) == 0) ne = std::stoi(tok.substr(3));
      else throw fail("unrecognized header token '" + tok + "'");
    }
    if (ndim != 2) throw fail("expected ndim=2");
    if (nv < 3 || ne < 1) throw fail("invalid vertex or element count");
  }
  for (int v = 0; v < nv; ++v) {
    std::istringstream ls(next_line());
    double x, y;
    if (!(ls >> x >> y)) throw fail("expected vertex coordinates 'x y'");
    m.vertices_.emplace_back(x, y);
  }
  for (int t = 0; t < ne; ++t) {
    std::istringstream ls(next_line());
    int i, j, k;
    if (!(ls >> i >> j >> k)) throw fail("expected triangle indices 'i j k'");
    for (int v : {i, j, k})
      if (v < 0 || v >= nv) throw fail("vertex index " + std::to_string(v) + " out of range");
    if (i == j || j == k || i == k) throw fail("degenerate triangle");
    m.triangles_.push_back({i, j, k});
  }
  m.finalize(periodic);
  return m;
}

Connectivity build_connectivity(const SimplexMesh& mesh) {
  Connectivity c;
  const int ne = mesh.n_triangles();
  c.neighbor.assign(ne, {-1, -1, -1});
  c.neighbor_local.assign(ne, {-1, -1, -1});
  c.shift.assign(ne, {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                      Eigen::Vector2d::Zero()});
  for (int t = 0; t < ne; ++t) {
    for (int le = 0; le < 3; ++le) {
      const Edge& e = mesh.edge(mesh.triangle_edges(t)[le]);
      if (e.interior()) {
        int side = (e.tri[0] == t && e.local[0] == le) ? 0 : 1;
        c.neighbor[t][le] = e.tri[1 - side];
        c.neighbor_local[t][le] = e.local[1 - side];
      } else if (e.periodic()) {
        const Edge& p = mesh.edge(e.partner);
        c.neighbor[t][le] = p.tri[0];
        c.neighbor_local[t][le] = p.local[0];
        c.shift[t][le] = e.shift;
      } else if (mesh.periodic()) {
        throw MeshError("mesh: dangling non-periodic boundary edge (" +
                        std::to_string(e.v0) + "," + std::to_string(e.v1) +
                        ") in periodic mode");
      }
    }
  }
  return c;
}

MeshQuality quality(const SimplexMesh& mesh) {
  MeshQuality q;
  q.n_elements = mesh.n_triangles();
  q.n_vertices = mesh.n_vertices();
  q.h_min = std::numeric_limits<double>::max();
  q.h_max = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    double h = 0.0;
    const auto& tri = mesh.triangle(t);
    for (int le = 0; le < 3; ++le)
      h = std::max(h, (mesh.vertex(tri[(le + 1) % 3]) - mesh.vertex(tri[le])).norm());
    q.h_min = std::min(q.h_min, h);
    q.h_max = std::max(q.h_max, h);
  }
  return q;
}

}  // namespace compatdg
