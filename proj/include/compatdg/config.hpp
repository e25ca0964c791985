// Declarative run configuration: a flat key = value text format with
// optional [section] headers (full key name is "section.key"). Grammar:
//   line    := blank | comment | section | pair
//   comment := '#' ...
//   section := '[' name ']'
//   pair    := key '=' value
// Unknown keys and malformed lines are reported with their line number.

#pragma once

#include <string>

#include "compatdg/cg.hpp"

namespace compatdg {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string system = "acoustics";
  bool deterministic = true;
  std::string output_dir = "out";
  int threads = 1;

  // mesh
  int nx = 10, ny = 10;
  std::string mesh_file;  // non-empty overrides the generator
  double xmin = -0.5, xmax = 0.5, ymin = -0.5, ymax = 0.5;
  bool periodic = true;

  // discretization
  int degree = 1;
  double dt = 0.0;        // fixed time step; 0 selects the CFL policy
  double cfl = 0.1;       // dt = cfl * h_min (linear), / ((2N+1) vmax) for euler
  bool cfl_scale_h = false;  // additionally scale cfl by h_min
  double final_time = 1.0;

  // solver
  double rel_tol = 1e-13;
  int max_iter = 0;
  std::string precond = "none";

  // scenario
  std::string scenario = "gaussian";
  double sigma = 0.05;
  double amplitude = 1.0;
  double rho = 1.0;
  double pin_x = 0.0, pin_y = 0.0;

  // output
  std::string series = "series.csv";
  int vtk_every = 0;    // steps between field dumps; 0 disables
  int flush_every = 1;
  int log_every = 1;

  CGConfig cg() const;
  void validate() const;  // throws ConfigError
};

/// Parses the file; throws ConfigError with "path:line:" prefixes.
RunConfig parse_config(const std::string& path);

}  // namespace compatdg
