#include "compatdg/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace compatdg {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SeriesWriter::SeriesWriter(const std::string& path, int flush_every)
    : path_(path), out_(path), flush_every_(flush_every < 1 ? 1 : flush_every) {
  if (!out_) throw std::runtime_error("series: cannot open '" + path + "'");
  out_ << header() << '\n';
}

void SeriesWriter::log_step(long step, double t, double energy, double eps_c,
                            double eps_d, int cg_iters, double residual) {
  out_ << step << ',' << fmt17(t) << ',' << fmt17(energy) << ',' << fmt17(eps_c) << ','
       << fmt17(eps_d) << ',' << cg_iters << ',' << fmt17(residual) << '\n';
  if (!out_) throw std::runtime_error("series: write failed on '" + path_ + "'");
  if (++rows_ % flush_every_ == 0) out_.flush();
}

void export_vtk(const std::string& path, const SimplexMesh& mesh,
                const FieldDG* dg_field, const char* dg_name,
                const FieldFEM* fem_field, const char* fem_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("vtk: cannot open '" + path + "'");
  out << "# vtk DataFile Version 3.0\ncompatdg field export\nASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";

  const int ne = mesh.n_triangles();
  const bool duplicated = dg_field != nullptr;
  const int npts = duplicated ? 3 * ne : mesh.n_vertices();

  out << "POINTS " << npts << " double\n";
  if (duplicated) {
    for (int e = 0; e < ne; ++e)
      for (int c = 0; c < 3; ++c) {
        const auto& v = mesh.vertex(mesh.triangle(e)[c]);
        out << fmt17(v.x()) << ' ' << fmt17(v.y()) << " 0\n";
      }
  } else {
    for (int v = 0; v < mesh.n_vertices(); ++v)
      out << fmt17(mesh.vertex(v).x()) << ' ' << fmt17(mesh.vertex(v).y()) << " 0\n";
  }

  out << "CELLS " << ne << ' ' << 4 * ne << '\n';
  for (int e = 0; e < ne; ++e) {
    if (duplicated)
      out << "3 " << 3 * e << ' ' << 3 * e + 1 << ' ' << 3 * e + 2 << '\n';
    else
      out << "3 " << mesh.triangle(e)[0] << ' ' << mesh.triangle(e)[1] << ' '
          << mesh.triangle(e)[2] << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) out << "5\n";

  out << "POINT_DATA " << npts << '\n';
  // reference coordinates of the triangle corners
  const Eigen::Vector2d corners[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  if (dg_field) {
    for (int m = 0; m < dg_field->components(); ++m) {
      out << "SCALARS " << dg_name << m + 1 << " double 1\nLOOKUP_TABLE default\n";
      for (int e = 0; e < ne; ++e)
        for (int c = 0; c < 3; ++c)
          out << fmt17(eval_field(*dg_field, e, corners[c])(m)) << '\n';
    }
  }
  if (fem_field) {
    const FEMSpace& s = *fem_field->space;
    for (int m = 0; m < fem_field->components(); ++m) {
      out << "SCALARS " << fem_name << m + 1 << " double 1\nLOOKUP_TABLE default\n";
      if (duplicated) {
        for (int e = 0; e < ne; ++e)
          for (int c = 0; c < 3; ++c)
            out << fmt17(fem_field->values(s.vertex_dof(mesh.triangle(e)[c]), m)) << '\n';
      } else {
        for (int v = 0; v < mesh.n_vertices(); ++v)
          out << fmt17(fem_field->values(s.vertex_dof(v), m)) << '\n';
      }
    }
  }
  if (!out) throw std::runtime_error("vtk: write failed on '" + path + "'");
}

ConvergenceTable convergence_table(const std::vector<std::string>& columns,
                                   const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 1) throw std::invalid_argument("convergence_table: no rows");
  for (size_t r = 1; r < rows.size(); ++r)
    if (!(rows[r].h < rows[r - 1].h))
      throw std::invalid_argument("convergence_table: h must decrease monotonically");
  ConvergenceTable t;
  t.columns = columns;
  t.rows = rows;
  t.orders.resize(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    t.orders[r].assign(columns.size(), std::nan(""));
    if (r == 0) continue;
    for (size_t c = 0; c < columns.size(); ++c)
      t.orders[r][c] = std::log(rows[r - 1].errors[c] / rows[r].errors[c]) /
                       std::log(rows[r - 1].h / rows[r].h);
  }
  return t;
}

std::string ConvergenceTable::formatted() const {
  std::string s = "      h     ";
  for (const auto& c : columns) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " %12s %6s", ("L2(" + c + ")").c_str(),
                  ("O(" + c + ")").c_str());
    s += buf;
  }
  s += '\n';
  for (size_t r = 0; r < rows.size(); ++r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%12.6g", rows[r].h);
    s += buf;
    for (size_t c = 0; c < columns.size(); ++c) {
      if (std::isnan(orders[r][c]))
        std::snprintf(buf, sizeof buf, " %12.4E %6s", rows[r].errors[c], "");
      else
        std::snprintf(buf, sizeof buf, " %12.4E %6.2f", rows[r].errors[c], orders[r][c]);
      s += buf;
    }
    s += '\n';
  }
  return s;
}

void ConvergenceTable::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("table: cannot open '" + path + "'");
  out << "h";
  for (const auto& c : columns) out << ",err_" << c << ",order_" << c;
  out << '\n';
  for (size_t r = 0; r < rows.size(); ++r) {
    out << fmt17(rows[r].h);
    for (size_t c = 0; c < columns.size(); ++c) {
      out << ',' << fmt17(rows[r].errors[c]) << ',';
      if (!std::isnan(orders[r][c])) out << fmt17(orders[r][c]);
    }
    out << '\n';
  }
}

}  // namespace compatdg
