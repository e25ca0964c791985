// Conforming 2D triangulations with edge connectivity and periodic
// boundary identification.

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace compatdg {

struct BoundingBox {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  double lx() const { return xmax - xmin; }
  double ly() const { return ymax - ymin; }
  double size() const { return std::max(lx(), ly()); }
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mesh edge with its one or two adjacent triangles. For a periodic boundary
/// edge, `partner` is the paired edge id and `shift` translates points on
/// this edge onto the partner edge.
struct Edge {
  int v0 = -1, v1 = -1;
  std::array<int, 2> tri = {-1, -1};        // adjacent triangles
  std::array<int, 2> local = {-1, -1};      // local edge index within each
  int partner = -1;                         // periodic partner edge, or -1
  Eigen::Vector2d shift = Eigen::Vector2d::Zero();

  bool interior() const { return tri[1] >= 0; }
  bool boundary() const { return tri[1] < 0; }
  bool periodic() const { return partner >= 0; }
};

struct MeshQuality {
  double h_min = 0.0, h_max = 0.0;
  int n_elements = 0, n_vertices = 0;
};

/// Per-triangle adjacency: for each of the three local edges, the neighbor
/// triangle (directly shared or across a periodic pairing), the neighbor's
/// local edge index, and the shift carrying own-edge points onto it.
struct Connectivity {
  std::vector<std::array<int, 3>> neighbor;        // -1 on a plain boundary
  std::vector<std::array<int, 3>> neighbor_local;
  std::vector<std::array<Eigen::Vector2d, 3>> shift;
};

/// Immutable after construction; triangles are counterclockwise and every
/// interior edge is shared by exactly two triangles with opposite traversal.
class SimplexMesh {
 public:
  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_triangles() const { return static_cast<int>(triangles_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const Eigen::Vector2d& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const BoundingBox& box() const { return box_; }
  bool periodic() const { return periodic_; }

  /// Triangle edge ids in local order (v0,v1), (v1,v2), (v2,v0).
  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }

  double signed_area(int t) const;

  static SimplexMesh generate_structured(int nx, int ny, const BoundingBox& box,
                                         bool periodic);
  /// Plain-text format: "ndim=2 nv=<n> ne=<m>", n lines "x y", m lines
  /// "i j k" (0-based). Clockwise triangles are reoriented with a warning
  /// on stderr. Throws MeshError with a line number on parse failures and
  /// names the offending edge on conformity violations.
  static SimplexMesh read(const std::string& path, bool periodic = false);

  friend Connectivity build_connectivity(const SimplexMesh& mesh);

 private:
  void finalize(bool periodic);  // orientation, edges, conformity, pairing

  std::vector<Eigen::Vector2d> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  BoundingBox box_;
  bool periodic_ = false;
};

Connectivity build_connectivity(const SimplexMesh& mesh);
MeshQuality quality(const SimplexMesh& mesh);

}  // namespace compatdg
