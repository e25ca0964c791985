#include <doctest.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "compatdg/config.hpp"
#include "compatdg/diagnostics.hpp"
#include "compatdg/operators.hpp"
#include "support.hpp"

using namespace compatdg;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string l;
  while (std::getline(in, l)) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("series csv schema and row counts") {
  auto path = (testsupport::tmp_dir() / "series.csv").string();
  {
    SeriesWriter w(path);
    w.log_step(0, 0.0, 1.0, 0.0, 0.0, 0, 0.0);
  }
  auto lines = read_lines(path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "step,t,energy,eps_c,eps_d,cg_iters,residual");

  {
    SeriesWriter w(path, 100);
    for (int s = 0; s < 1000; ++s)
      w.log_step(s, s * 0.01, 1.0 + s, 1e-15, 2e-15, 3, 1e-13);
  }
  CHECK(read_lines(path).size() == 1001);
}

TEST_CASE("series csv round-trips doubles bit-exactly") {
  auto path = (testsupport::tmp_dir() / "series_rt.csv").string();
  const double values[4] = {1.0 / 3.0, 6.02214076e23, -5.397605346934028e-79, 0.1};
  {
    SeriesWriter w(path);
    w.log_step(7, values[0], values[1], values[2], values[3], 42, values[0] * values[3]);
  }
  auto lines = read_lines(path);
  REQUIRE(lines.size() == 2);
  std::stringstream ss(lines[1]);
  std::string tok;
  std::vector<std::string> toks;
  while (std::getline(ss, tok, ',')) toks.push_back(tok);
  REQUIRE(toks.size() == 7);
  const double expected[4] = {values[0], values[1], values[2], values[3]};
  const int cols[4] = {1, 2, 3, 4};
  for (int k = 0; k < 4; ++k) {
    double parsed = std::strtod(toks[cols[k]].c_str(), nullptr);
    CHECK(std::memcmp(&parsed, &expected[k], sizeof(double)) == 0);
  }
}

TEST_CASE("vtk export") {
  SimplexMesh mesh = SimplexMesh::generate_structured(1, 1, {0, 1, 0, 1}, false);
  DGSpace dg(mesh, 1);
  FEMSpace fem(mesh, 2);

  SUBCASE("constant DG field: two cells, constant point data") {
    FieldDG f(dg, 1);
    f.coeffs.setConstant(2.5);
    auto path = (testsupport::tmp_dir() / "const.vtk").string();
    export_vtk(path, mesh, &f, "u", nullptr, nullptr);
    auto lines = read_lines(path);
    CHECK(lines[0] == "# vtk DataFile Version 3.0");
    bool has_cells = false, has_type5 = false;
    int const_count = 0;
    for (const auto& l : lines) {
      if (l.rfind("CELLS 2 ", 0) == 0) has_cells = true;
      if (l == "5") has_type5 = true;
      if (l == "2.5") const_count++;
    }
    CHECK(has_cells);
    CHECK(has_type5);
    CHECK(const_count == 6);  // 3 duplicated corner points per triangle
  }

  SUBCASE("a DG jump shows up on duplicated points") {
    FieldDG f(dg, 1);
    f.coeffs.middleRows(dg.offset(0), dg.local_dofs()).setConstant(1.0);
    f.coeffs.middleRows(dg.offset(1), dg.local_dofs()).setConstant(-1.0);
    auto path = (testsupport::tmp_dir() / "jump.vtk").string();
    export_vtk(path, mesh, &f, "u", nullptr, nullptr);
    int plus = 0, minus = 0;
    for (const auto& l : read_lines(path)) {
      if (l == "1") plus++;
      if (l == "-1") minus++;
    }
    CHECK(plus == 3);
    CHECK(minus == 3);
  }

  SUBCASE("structural smoke: counts are consistent and numbers parse") {
    FieldDG f(dg, 2);
    FieldFEM g(fem, 1);
    g.values.setConstant(0.25);
    auto path = (testsupport::tmp_dir() / "smoke.vtk").string();
    export_vtk(path, mesh, &f, "v", &g, "p");
    auto lines = read_lines(path);
    int npoints = -1, ndata = 0;
    bool in_points = false;
    for (size_t i = 0; i < lines.size(); ++i) {
      std::istringstream is(lines[i]);
      std::string word;
      is >> word;
      if (word == "POINTS") {
        is >> npoints;
        in_points = true;
        continue;
      }
      if (word == "CELLS") in_points = false;
      if (word == "SCALARS") ndata++;
      if (in_points && npoints > 0) {
        double a, b, c;
        std::istringstream num(lines[i]);
        CHECK((num >> a >> b >> c));
      }
    }
    CHECK(npoints == 6);
    CHECK(ndata == 3);  // v1, v2, p
  }

  SUBCASE("byte-identical across repeated exports") {
    FieldDG f(dg, 1);
    f.coeffs.setRandom();
    auto p1 = (testsupport::tmp_dir() / "det1.vtk").string();
    auto p2 = (testsupport::tmp_dir() / "det2.vtk").string();
    export_vtk(p1, mesh, &f, "u", nullptr, nullptr);
    export_vtk(p2, mesh, &f, "u", nullptr, nullptr);
    std::ifstream a(p1), b(p2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
  }
}

TEST_CASE("triplet matrix dumps parse and match the assembled blocks") {
  SimplexMesh mesh = SimplexMesh::generate_structured(2, 2, {0, 1, 0, 1}, false);
  DGSpace dg(mesh, 1);
  FEMSpace fem(mesh, 2);
  CompatibleOperators ops(dg, fem);
  auto mpath = (testsupport::tmp_dir() / "mass.txt").string();
  auto kpath = (testsupport::tmp_dir() / "stiff.txt").string();
  auto dpath = (testsupport::tmp_dir() / "dgmass.txt").string();
  ops.dump_mass_fem(mpath);
  ops.dump_stiffness(kpath);
  ops.dump_mass_dg(dpath);

  {
    std::ifstream in(mpath);
    int r, c;
    double v;
    double trace = 0.0;
    int count = 0;
    while (in >> r >> c >> v) {
      if (r == c) trace += v;
      ++count;
    }
    CHECK(count > 0);
    CHECK(trace == doctest::Approx(ops.mass_fem().diagonal().sum()).epsilon(1e-14));
  }
  {
    std::ifstream in(kpath);
    int r, c, comp;
    double v;
    double sum = 0.0;
    while (in >> r >> c >> comp >> v) sum += std::abs(v);
    double expect = 0.0;
    for (int e = 0; e < mesh.n_triangles(); ++e)
      expect += ops.kx(e).array().abs().sum() + ops.ky(e).array().abs().sum();
    CHECK(sum == doctest::Approx(expect).epsilon(1e-12));
  }
  {
    std::ifstream in(dpath);
    int r, c;
    double v;
    int count = 0;
    while (in >> r >> c >> v) ++count;
    CHECK(count == mesh.n_triangles() * dg.local_dofs() * dg.local_dofs());
  }
}

TEST_CASE("convergence tables") {
  SUBCASE("order 2 from a clean halving") {
    ConvergenceTable t =
        convergence_table({"u"}, {{0.1, {1e-2}}, {0.05, {2.5e-3}}});
    CHECK(t.orders[1][0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(t.formatted().find("2.00") != std::string::npos);
  }
  SUBCASE("single run leaves the order column blank") {
    ConvergenceTable t = convergence_table({"u"}, {{0.1, {1e-2}}});
    CHECK(std::isnan(t.orders[0][0]));
  }
  SUBCASE("non-monotone h is rejected") {
    CHECK_THROWS_AS(convergence_table({"u"}, {{0.05, {1e-3}}, {0.1, {1e-2}}}),
                    std::invalid_argument);
  }
  SUBCASE("csv export") {
    auto path = (testsupport::tmp_dir() / "table.csv").string();
    convergence_table({"u"}, {{0.1, {1e-2}}, {0.05, {2.5e-3}}}).write_csv(path);
    auto lines = read_lines(path);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "h,err_u,order_u");
  }
}

TEST_CASE("config parsing") {
  auto dir = testsupport::tmp_dir();

  SUBCASE("full config round-trip") {
    auto path = dir / "good.cfg";
    std::ofstream(path) << "system = maxwellglm\n"
                           "deterministic = true\n"
                           "output_dir = out/x\n"
                           "[mesh]\nnx = 30\nny = 30\nxmin = -0.5\nxmax = 0.5\n"
                           "ymin = -0.5\nymax = 0.5\nperiodic = true\n"
                           "[discretization]\ndegree = 3\ndt = 0.01\nfinal_time = 10\n"
                           "[solver]\nrel_tol = 1e-13\nprecond = jacobi\n"
                           "[scenario]\nname = t1\nsigma = 0.05\n"
                           "[output]\nseries = series.csv\nvtk_every = 100\n";
    RunConfig cfg = parse_config(path.string());
    CHECK(cfg.system == "maxwellglm");
    CHECK(cfg.nx == 30);
    CHECK(cfg.degree == 3);
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.precond == "jacobi");
    CHECK(cfg.scenario == "t1");
    CHECK(cfg.vtk_every == 100);
  }

  SUBCASE("malformed line reports its number") {
    auto path = dir / "bad.cfg";
    std::ofstream(path) << "system = acoustics\nnot a pair\n";
    CHECK_THROWS_WITH_AS(parse_config(path.string()), doctest::Contains(":2:"),
                         ConfigError);
  }

  SUBCASE("unknown keys are rejected") {
    auto path = dir / "unknown.cfg";
    std::ofstream(path) << "sytem = acoustics\n";
    CHECK_THROWS_WITH_AS(parse_config(path.string()), doctest::Contains("unknown key"),
                         ConfigError);
  }

  SUBCASE("validation catches bad values") {
    auto path = dir / "badval.cfg";
    std::ofstream(path) << "[discretization]\ndegree = -1\n";
    CHECK_THROWS_AS(parse_config(path.string()), ConfigError);
  }
}
