// Command-line driver: run a configured scenario, verify the operator
// identities, or run a mesh-refinement convergence sweep.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "compatdg/driver.hpp"
#include "compatdg/verify.hpp"

namespace {

using namespace compatdg;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIO = 4;

std::string apply_output_root(const std::string& dir) {
  const char* root = std::getenv("COMPATDG_OUTPUT_ROOT");
  if (!root || dir.empty() || std::filesystem::path(dir).is_absolute()) return dir;
  return (std::filesystem::path(root) / dir).string();
}

int cmd_run(const std::string& config_path) {
  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }
  cfg.output_dir = apply_output_root(cfg.output_dir);
  try {
    RunSummary sum = run_scenario(cfg);
    std::cout << "steps " << sum.steps << ", dt " << sum.dt << ", energy "
              << sum.energy_initial << " -> " << sum.energy_final << ", max drift "
              << sum.max_energy_drift << ", max eps_c " << sum.max_eps_c
              << ", max eps_d " << sum.max_eps_d << ", cg iterations "
              << sum.total_cg_iterations << ", wall " << sum.wall_time << " s\n";
    for (size_t i = 0; i < sum.error_names.size(); ++i)
      std::cout << "L2(" << sum.error_names[i] << ") = " << sum.final_errors(i) << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const CGFailure& e) {
    std::cerr << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitIO;
  }
}

int cmd_verify(int nx, int ny, int degree, std::uint64_t seed, const std::string& mesh_file) {
  try {
    std::unique_ptr<SimplexMesh> mesh;
    if (!mesh_file.empty())
      mesh = std::make_unique<SimplexMesh>(SimplexMesh::read(mesh_file, true));
    else
      mesh = std::make_unique<SimplexMesh>(SimplexMesh::generate_structured(
          nx, ny, BoundingBox{-0.5, 0.5, -0.5, 0.5}, true));
    DGSpace dg(*mesh, degree);
    FEMSpace fem(*mesh, degree + 1);
    CompatibleOperators ops(dg, fem);
    VerifyReport rep = verify_operators(ops, seed);
    std::cout << "operator identity suite (" << mesh->n_triangles() << " triangles, N="
              << degree << ", seed " << seed << ")\n"
              << "vandermonde condition: dg " << dg.ref().vandermonde_condition()
              << ", fem " << fem.ref().vandermonde_condition() << "\n"
              << rep.formatted();
    if (!rep.pass()) {
      std::cout << "FAIL: worst value " << rep.worst() << " exceeds 1e-12\n";
      return 1;
    }
    std::cout << "PASS: all values <= 1e-12\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitIO;
  }
}

int cmd_converge(const std::string& system, int degree, std::vector<int> levels,
                 double cfl, bool cfl_scale_h, double rel_tol, const std::string& out_csv) {
  try {
    std::vector<ConvergenceRow> rows;
    std::vector<std::string> columns;
    for (int nxy : levels) {
      RunConfig cfg;
      cfg.system = system;
      cfg.degree = degree;
      cfg.nx = cfg.ny = nxy;
      cfg.cfl = cfl;
      cfg.cfl_scale_h = cfl_scale_h;
      cfg.rel_tol = rel_tol;
      cfg.output_dir = apply_output_root("out/converge_" + system + "_N" +
                                         std::to_string(degree) + "_" + std::to_string(nxy));
      if (system == "maxwellglm") {
        cfg.scenario = "planewave";
        cfg.xmin = cfg.ymin = -1.0;
        cfg.xmax = cfg.ymax = 1.0;
        cfg.final_time = std::sqrt(2.0);
      } else if (system == "euler") {
        cfg.scenario = "tgv";
        cfg.xmin = cfg.ymin = 0.0;
        cfg.xmax = cfg.ymax = 2.0 * M_PI;
        cfg.final_time = 0.25;
      } else if (system == "acoustics") {
        cfg.scenario = "planewave";
        cfg.final_time = 0.25;
      } else {
        std::cerr << "converge: unsupported system '" << system << "'\n";
        return kExitConfig;
      }
      RunSummary sum = run_scenario(cfg);
      columns = sum.error_names;
      ConvergenceRow row;
      row.h = quality(SimplexMesh::generate_structured(
                          nxy, nxy, BoundingBox{cfg.xmin, cfg.xmax, cfg.ymin, cfg.ymax},
                          true))
                  .h_max;
      row.errors.assign(sum.final_errors.data(),
                        sum.final_errors.data() + sum.final_errors.size());
      rows.push_back(row);
      std::cout << "N_x=" << nxy << " done, wall " << sum.wall_time << " s\n";
    }
    ConvergenceTable table = convergence_table(columns, rows);
    std::cout << table.formatted();
    if (!out_csv.empty()) table.write_csv(apply_output_root(out_csv));
    if (rows.size() >= 2) {
      double finest = table.orders.back()[0];
      double target = degree + 1 - 0.3;
      if (finest < target) {
        std::cout << "FAIL: finest-pair order " << finest << " below " << target << '\n';
        return 1;
      }
      std::cout << "PASS: finest-pair order " << finest << " >= " << target << '\n';
    }
    return 0;
  } catch (const CGFailure& e) {
    std::cerr << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitIO;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compatible DG / continuous FEM solver suite for hyperbolic systems "
               "with involutions"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("config", config_path, "path to the run config")->required();

  int nx = 20, ny = 20, degree = 3;
  std::uint64_t seed = 1709;
  std::string mesh_file;
  auto* verify = app.add_subcommand("verify", "operator identity and trace-continuity suite");
  verify->add_option("--nx", nx, "structured mesh cells in x");
  verify->add_option("--ny", ny, "structured mesh cells in y");
  verify->add_option("--degree", degree, "DG polynomial degree N");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--mesh", mesh_file, "mesh file instead of the structured grid");

  std::string system;
  std::vector<int> levels;
  double cfl = 0.1, rel_tol = 1e-13;
  bool cfl_scale_h = false;
  std::string out_csv;
  auto* converge = app.add_subcommand("converge", "mesh-refinement convergence sweep");
  converge->add_option("system", system, "acoustics | maxwellglm | euler")->required();
  converge->add_option("--degree", degree, "DG polynomial degree N")->required();
  converge->add_option("--levels", levels, "mesh sizes N_x for the sweep")
      ->required()->delimiter(',');
  converge->add_option("--cfl", cfl, "CFL number for the dt policy");
  converge->add_flag("--cfl-scale-h", cfl_scale_h, "scale the CFL number by h_min");
  converge->add_option("--rel-tol", rel_tol, "CG relative tolerance");
  converge->add_option("--csv", out_csv, "write the table to this CSV path");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path);
  if (verify->parsed()) return cmd_verify(nx, ny, degree, seed, mesh_file);
  return cmd_converge(system, degree, levels, cfl, cfl_scale_h, rel_tol, out_csv);
}
