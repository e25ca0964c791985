#include "compatdg/config.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace compatdg {

CGConfig RunConfig::cg() const {
  CGConfig c;
  c.rel_tol = rel_tol;
  c.max_iter = max_iter;
  c.precond = precond == "jacobi" ? CGConfig::Precond::jacobi : CGConfig::Precond::none;
  return c;
}

void RunConfig::validate() const {
  if (system != "acoustics" && system != "maxwell" && system != "maxwellglm" &&
      system != "euler")
    throw ConfigError("config: unknown system '" + system + "'");
  if (degree < 0) throw ConfigError("config: degree must be >= 0");
  if (final_time < 0.0) throw ConfigError("config: final_time must be >= 0");
  if (dt < 0.0 || (dt == 0.0 && cfl <= 0.0))
    throw ConfigError("config: need dt > 0 or cfl > 0");
  if (nx < 1 || ny < 1) throw ConfigError("config: nx, ny must be >= 1");
  if (xmax <= xmin || ymax <= ymin) throw ConfigError("config: empty domain box");
  if (sigma <= 0.0) throw ConfigError("config: sigma must be > 0");
  if (rel_tol <= 0.0) throw ConfigError("config: rel_tol must be > 0");
  if (precond != "none" && precond != "jacobi")
    throw ConfigError("config: precond must be none or jacobi");
  if (!mesh_file.empty() && !std::filesystem::exists(mesh_file))
    throw ConfigError("config: mesh file '" + mesh_file + "' does not exist");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::map<std::string, std::string> kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(where + ": empty key or value");
    std::string full = section.empty() ? key : section + "." + key;
    if (kv.count(full)) throw ConfigError(where + ": duplicate key '" + full + "'");
    kv[full] = value;

    try {
      if (full == "system") cfg.system = value;
      else if (full == "deterministic") cfg.deterministic = parse_bool(value, where);
      else if (full == "output_dir") cfg.output_dir = value;
      else if (full == "threads") cfg.threads = std::stoi(value);
      else if (full == "mesh.nx") cfg.nx = std::stoi(value);
      else if (full == "mesh.ny") cfg.ny = std::stoi(value);
      else if (full == "mesh.file") cfg.mesh_file = value;
      else if (full == "mesh.xmin") cfg.xmin = std::stod(value);
      else if (full == "mesh.xmax") cfg.xmax = std::stod(value);
      else if (full == "mesh.ymin") cfg.ymin = std::stod(value);
      else if (full == "mesh.ymax") cfg.ymax = std::stod(value);
      else if (full == "mesh.periodic") cfg.periodic = parse_bool(value, where);
      else if (full == "discretization.degree") cfg.degree = std::stoi(value);
      else if (full == "discretization.dt") cfg.dt = std::stod(value);
      else if (full == "discretization.cfl") cfg.cfl = std::stod(value);
      else if (full == "discretization.cfl_scale_h") cfg.cfl_scale_h = parse_bool(value, where);
      else if (full == "discretization.final_time") cfg.final_time = std::stod(value);
      else if (full == "solver.rel_tol") cfg.rel_tol = std::stod(value);
      else if (full == "solver.max_iter") cfg.max_iter = std::stoi(value);
      else if (full == "solver.precond") cfg.precond = value;
      else if (full == "scenario.name") cfg.scenario = value;
      else if (full == "scenario.sigma") cfg.sigma = std::stod(value);
      else if (full == "scenario.amplitude") cfg.amplitude = std::stod(value);
      else if (full == "scenario.rho") cfg.rho = std::stod(value);
      else if (full == "scenario.pin_x") cfg.pin_x = std::stod(value);
      else if (full == "scenario.pin_y") cfg.pin_y = std::stod(value);
      else if (full == "output.series") cfg.series = value;
      else if (full == "output.vtk_every") cfg.vtk_every = std::stoi(value);
      else if (full == "output.flush_every") cfg.flush_every = std::stoi(value);
      else if (full == "output.log_every") cfg.log_every = std::stoi(value);
      else throw ConfigError(where + ": unknown key '" + full + "'");
    } catch (const std::invalid_argument&) {
      throw ConfigError(where + ": cannot parse value '" + value + "' for '" + full + "'");
    } catch (const std::out_of_range&) {
      throw ConfigError(where + ": value '" + value + "' out of range for '" + full + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace compatdg
