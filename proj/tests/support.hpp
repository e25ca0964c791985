// Shared helpers for the test suites.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "compatdg/mesh.hpp"
#include "compatdg/rng.hpp"

namespace testsupport {

inline std::filesystem::path tmp_dir() {
  std::filesystem::path p(TEST_TMP_DIR);
  std::filesystem::create_directories(p);
  return p;
}

/// Exact integral of xi^a eta^b over the unit reference triangle.
inline double monomial_integral(int a, int b) {
  // a! b! / (a+b+2)!
  double v = 1.0;
  for (int k = 1; k <= a; ++k) v *= k;
  for (int k = 1; k <= b; ++k) v *= k;
  for (int k = 1; k <= a + b + 2; ++k) v /= k;
  return v;
}

/// Writes a periodic-compatible unstructured mesh: structured nx x ny grid
/// with interior vertices jittered, boundary kept so periodic pairing works.
inline std::string write_jittered_mesh(const std::string& name, int nx, int ny,
                                       const compatdg::BoundingBox& box,
                                       double jitter = 0.22, std::uint64_t seed = 42) {
  compatdg::SplitMix64 rng(seed);
  const double dx = box.lx() / nx, dy = box.ly() / ny;
  std::vector<Eigen::Vector2d> verts;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      Eigen::Vector2d v(box.xmin + i * dx, box.ymin + j * dy);
      if (i > 0 && i < nx && j > 0 && j < ny) {
        v.x() += jitter * dx * (2.0 * rng.uniform() - 1.0);
        v.y() += jitter * dy * (2.0 * rng.uniform() - 1.0);
      }
      verts.push_back(v);
    }
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        tris.push_back({v00, v10, v11});
        tris.push_back({v00, v11, v01});
      } else {
        tris.push_back({v00, v10, v01});
        tris.push_back({v10, v11, v01});
      }
    }
  auto path = tmp_dir() / name;
  std::ofstream out(path);
  out << "ndim=2 nv=" << verts.size() << " ne=" << tris.size() << "\n";
  out.precision(17);
  for (const auto& v : verts) out << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : tris) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return path.string();
}

}  // namespace testsupport
