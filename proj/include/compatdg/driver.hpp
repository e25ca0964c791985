// Scenario setup and the time loop: builds mesh, spaces and operators from a
// RunConfig, integrates to the final time, and emits the series CSV, field
// dumps and a summary.

#pragma once

#include <memory>

#include "compatdg/config.hpp"
#include "compatdg/diagnostics.hpp"
#include "compatdg/scenarios.hpp"
#include "compatdg/steppers.hpp"

namespace compatdg {

struct RunSummary {
  long steps = 0;
  double dt = 0.0;
  double energy_initial = 0.0;
  double energy_final = 0.0;
  double max_energy_drift = 0.0;  // max over logged steps of |E - E0| / E0
  double max_eps_c = 0.0;
  double max_eps_d = 0.0;
  long total_cg_iterations = 0;
  double wall_time = 0.0;
  Eigen::VectorXd final_errors;   // componentwise L2 vs the exact solution,
  std::vector<std::string> error_names;  // empty when no exact solution applies
  std::string series_path;
};

/// Builds everything from the config and runs the time loop. Per logged step
/// the series receives energy and the involution functionals of the DG field
/// that carries the system's constraint (v for acoustics/euler, B otherwise).
RunSummary run_scenario(const RunConfig& cfg);

/// Euler-only helper: kinetic energy history is appended per step when
/// `kinetic_history` is non-null (used by the long-run structure checks).
RunSummary run_scenario(const RunConfig& cfg, std::vector<double>* kinetic_history);

}  // namespace compatdg
