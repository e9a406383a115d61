#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "penrose/errors.hpp"
#include "penrose/pipeline.hpp"
#include "penrose/report.hpp"
#include "penrose/scenario.hpp"

using namespace penrose;
using namespace penrose::scenario;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("penrose_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::DomainError;
}

}  // namespace

TEST_CASE("minimal scenario gets defaults") {
  const auto s = parse_scenario("[data]\nkind = schwarzschild\nmass = 1\n", Format::Ini);
  CHECK(s.data.kind == DataKind::Schwarzschild);
  CHECK(s.data.mass == 1.0);
  CHECK(s.flow.dt == 0.01);
  CHECK(s.flow.t_max == 6.0);
  CHECK(s.mode == Mode::Both);
  CHECK(s.p_factor_j2 == levelset::PFactor::UMinusPhi);
  CHECK_NOTHROW(validate(s));

  const auto j = parse_scenario(R"({"data": {"kind": "schwarzschild", "mass": 1}, "flow": {"dt": 0.02},
                                   "output": {"emit": ["json", "svg"]}})",
                                Format::Json);
  CHECK(j.data.mass == 1.0);
  CHECK(j.flow.dt == 0.02);
  CHECK(j.emit == std::vector<std::string>{"json", "svg"});
}

TEST_CASE("scenario diagnostics") {
  try {
    parse_scenario("name = x\n\n[flow]\ndt = 0.01\nspeed = 3\n", Format::Ini, "f.ini");
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("f.ini:5") != std::string::npos);
    CHECK(std::string(e.what()).find("flow.speed") != std::string::npos);
  }
  CHECK(kind_of([] { parse_scenario("[flow]\ndt = fast\n", Format::Ini); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_scenario("[data\nkind = x\n", Format::Ini); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_scenario("{\"data\": ", Format::Json); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_scenario("[data]\nkind = kerr\n", Format::Ini); }) == ErrorKind::ParseError);

  auto s = parse_scenario("[data]\nkind = schwarzschild\nmass = -1\n[flow]\ndt = 0.5\n", Format::Ini);
  try {
    validate(s);
    FAIL("invalid scenario accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(std::string(e.what()).find("data.mass") != std::string::npos);
    CHECK(std::string(e.what()).find("flow.dt") != std::string::npos);
  }
  s = parse_scenario("[chart]\npoints_per_decade = 16\n", Format::Ini);
  CHECK(kind_of([&] { validate(s); }) == ErrorKind::ValidationError);
}

TEST_CASE("custom factor tables") {
  const auto dir = scratch_dir("table");
  {
    std::ofstream out(dir / "u.csv");
    out.precision(17);
    out << "r,U\n";
    for (int i = 0; i < 400; ++i) {
      const double r = 0.05 * std::pow(1.03, i);
      out << r << ',' << (i == 200 ? -0.5 : 1.0 + 0.5 / r) << '\n';
    }
  }
  {
    std::ofstream out(dir / "s.ini");
    out << "name = t\n[data]\nkind = table\ntable = u.csv\n";
  }
  CHECK(kind_of([&] { load_scenario(dir / "s.ini"); }) == ErrorKind::ValidationError);
  CHECK(kind_of([&] { load_scenario(dir / "missing.ini"); }) == ErrorKind::IoError);

  {
    std::ofstream out(dir / "u.csv");
    out.precision(17);
    out << "r,U\n";
    for (int i = 0; i < 400; ++i) {
      const double r = 0.05 * std::pow(1.03, i);
      out << r << ',' << 1.0 + 0.5 / r << '\n';
    }
  }
  const auto s = load_scenario(dir / "s.ini");
  const auto data = build_data(s);
  CHECK(data.is_tabulated());
  CHECK(data.factor(2.0) == doctest::Approx(1.25).epsilon(1e-9));
  // Harmonic table: the spline of r (U - a) carries no curvature.
  CHECK(std::abs(data.scalar_curvature(0.0, 1.0)) < 1e-8);
}

TEST_CASE("Schwarzschild pipeline and reports") {
  auto s = parse_scenario("name = sch\n[data]\nkind = schwarzschild\nmass = 1\n[flow]\nt_max = 3\n"
                          "[pipeline]\nmode = levelset\n",
                          Format::Ini);
  validate(s);
  const auto b = pipeline::run_pipeline(s);
  REQUIRE(b.complete());
  REQUIRE(b.levelset);
  CHECK_FALSE(b.spinor);
  CHECK(b.levelset->status == "verified");
  CHECK(b.levelset->integral_P < 1e-6);
  CHECK(std::abs(b.levelset->gap) < 1e-4);
  CHECK(b.levelset->gap == MassReport::compute_gap(b.levelset->mass, b.levelset->area, b.levelset->integral_RQ,
                                                   b.levelset->integral_P));
  CHECK(b.exit_code() == 0);
  REQUIRE(b.lsf);
  CHECK(b.lsf->residual < 0.02);

  const auto csv = report::trajectory_csv(b);
  std::istringstream rows(csv);
  std::string header, first;
  std::getline(rows, header);
  std::getline(rows, first);
  CHECK(header == "t,mass,area,horizon_r,components,mass_tilde,jumped");
  std::vector<double> cols;
  std::istringstream cells(first);
  for (std::string c; std::getline(cells, c, ',');) cols.push_back(std::stod(c));
  CHECK(cols[0] == 0.0);
  CHECK(cols[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cols[2] == doctest::Approx(16 * std::numbers::pi).epsilon(1e-9));
  CHECK(cols[3] == doctest::Approx(0.5).epsilon(1e-9));

  pipeline::ReportBundle empty;
  CHECK(report::trajectory_csv(empty) == header + "\n");

  // Determinism: a second run gives byte-identical files.
  const auto d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  const auto f1 = report::emit_report(b, d1, {"json", "csv", "svg"});
  const auto f2 = report::emit_report(pipeline::run_pipeline(s), d2, {"json", "csv", "svg"});
  REQUIRE(f1.size() == f2.size());
  for (std::size_t i = 0; i < f1.size(); ++i) {
    CHECK(f1[i].filename() == f2[i].filename());
    CHECK(slurp(f1[i]) == slurp(f2[i]));
  }
  CHECK(slurp(d1 / "sch.report.json").find("\"schema\": \"penrose-flow-report/v1\"") != std::string::npos);
  CHECK(fs::exists(d1 / "sch.profile_levelset.csv"));
}

TEST_CASE("gates, informational reports and partial bundles") {
  auto s = parse_scenario("[data]\nkind = smoothed_pole\nmass = 1\neps = 0.1\n[flow]\nt_max = 6\n"
                          "[pipeline]\nmode = spinor\nequality_tolerance = 1e-12\n",
                          Format::Ini);
  auto b = pipeline::run_pipeline(s);
  REQUIRE(b.spinor);
  CHECK(b.exit_code() == 2);

  s = parse_scenario("[data]\nkind = brill_lindquist\nm1 = 0.5\nm2 = 0.5\nseparation = 10\n"
                     "[flow]\nt_max = 0.2\ndt = 0.05\n[pipeline]\nmode = levelset\n",
                     Format::Ini);
  b = pipeline::run_pipeline(s);
  REQUIRE(b.levelset);
  CHECK(b.levelset->status == "informational");
  CHECK(b.levelset->note.find("2 components") != std::string::npos);
  CHECK(b.steps.front().components == 2);
  CHECK(b.exit_code() == 0);

  s = parse_scenario("[data]\nkind = table\ntable = /nonexistent/u.csv\n", Format::Ini);
  b = pipeline::run_pipeline(s);
  CHECK_FALSE(b.complete());
  CHECK(b.exit_code() == 3);
  CHECK(report::to_json(b).find("\"status\": \"failed\"") != std::string::npos);
}
