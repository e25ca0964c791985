// Time-series CSV logging, legacy-VTK field export and convergence tables.

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "compatdg/spaces.hpp"

namespace compatdg {

/// One CSV artifact with the fixed schema
///   step,t,energy,eps_c,eps_d,cg_iters,residual
/// Values are written with 17 significant digits so a parse round-trips
/// bit-exactly.
class SeriesWriter {
 public:
  SeriesWriter(const std::string& path, int flush_every = 1);
  void log_step(long step, double t, double energy, double eps_c, double eps_d,
                int cg_iters, double residual);
  const std::string& path() const { return path_; }
  static const char* header() { return "step,t,energy,eps_c,eps_d,cg_iters,residual"; }

 private:
  std::string path_;
  std::ofstream out_;
  int flush_every_;
  long rows_ = 0;
};

/// Legacy ASCII VTK (unstructured grid, triangle cells). DG fields are
/// written on per-element corner points, duplicated so jumps stay visible;
/// FEM fields on the shared mesh vertices. Output is byte-deterministic
/// for a fixed state.
void export_vtk(const std::string& path, const SimplexMesh& mesh,
                const FieldDG* dg_field, const char* dg_name,
                const FieldFEM* fem_field, const char* fem_name);

struct ConvergenceRow {
  double h = 0.0;
  std::vector<double> errors;
};

struct ConvergenceTable {
  std::vector<std::string> columns;          // error-column names
  std::vector<ConvergenceRow> rows;
  std::vector<std::vector<double>> orders;   // orders[r][c], row 0 empty (NaN)

  std::string formatted() const;
  void write_csv(const std::string& path) const;
};

/// Observed order between consecutive rows: log(e1/e2) / log(h1/h2).
/// Throws std::invalid_argument when h is not strictly decreasing.
ConvergenceTable convergence_table(const std::vector<std::string>& columns,
                                   const std::vector<ConvergenceRow>& rows);

}  // namespace compatdg
