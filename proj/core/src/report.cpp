#include "penrose/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "penrose/errors.hpp"

#ifndef PENROSE_VERSION
#define PENROSE_VERSION "unknown"
#endif

namespace penrose::report {

namespace {

using nlohmann::ordered_json;

ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json scenario_json(const scenario::Scenario& s) {
  ordered_json data{{"kind", scenario::to_string(s.data.kind)}};
  switch (s.data.kind) {
    case scenario::DataKind::Schwarzschild: data["mass"] = s.data.mass; break;
    case scenario::DataKind::SmoothedPole:
      data["mass"] = s.data.mass;
      data["eps"] = s.data.eps;
      break;
    case scenario::DataKind::BrillLindquist:
      data["m1"] = s.data.m1;
      data["m2"] = s.data.m2;
      data["separation"] = s.data.separation;
      break;
    case scenario::DataKind::Table:
      data["table"] = s.data.table.generic_string();
      if (s.data.r_fit) data["r_fit"] = *s.data.r_fit;
      break;
  }
  return {
      {"name", s.name},
      {"data", data},
      {"chart",
       {{"points_per_decade", s.points_per_decade},
        {"mu_nodes", s.mu_nodes},
        {"angular_cells", s.flow.angular_cells},
        {"sources_per_component", s.flow.sources_per_component}}},
      {"flow",
       {{"dt", s.flow.dt},
        {"t_max", s.flow.t_max},
        {"convergence_threshold", s.flow.convergence_threshold},
        {"stop_on_convergence", s.flow.stop_on_convergence},
        {"enclosure_tolerance", s.flow.enclosure_tolerance}}},
      {"pipeline",
       {{"mode", scenario::to_string(s.mode)},
        {"p_factor_j2", s.p_factor_j2 == levelset::PFactor::Phi ? "phi" : "u_minus_phi"},
        {"inequality_tolerance", s.inequality_tolerance},
        {"equality_tolerance", s.equality_tolerance},
        {"lsf_tolerance", s.lsf_tolerance}}},
  };
}

ordered_json mass_report_json(const MassReport& r) {
  ordered_json prov = ordered_json::object();
  for (const auto& [k, v] : r.provenance) prov[k] = v;
  return {{"method", r.method},
          {"status", r.status},
          {"mass", num(r.mass)},
          {"area", num(r.area)},
          {"area_term", num(r.area_term)},
          {"integral_RQ", num(r.integral_RQ)},
          {"integral_P", num(r.integral_P)},
          {"gap", num(r.gap)},
          {"tail_estimate", num(r.tail_estimate)},
          {"guard_events", r.guard_events},
          {"max_solver_residual", num(r.max_solver_residual)},
          {"note", r.note},
          {"provenance", prov}};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write " + p.string());
  out << text;
  if (!out) fail(ErrorKind::IoError, "write failed for " + p.string());
}

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string colour;
};

// Minimal line plot with axis ranges, tick labels and a legend.
std::string line_plot(const std::string& title, const std::string& xlabel, const std::vector<Series>& series) {
  const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x0 = 0.0, x1 = 1.0;
  if (!(y1 > y0)) {
    const double c = std::isfinite(y0) ? y0 : 0.0;
    y0 = c - 1.0;
    y1 = c + 1.0;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    o << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << number(xv) << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << number(yv) << "</text>\n";
  }
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  int row = 0;
  for (const auto& s : series) {
    o << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) o << number(px(s.x[i])) << ',' << number(py(s.y[i])) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 + 16 * row++ << "\" fill=\"" << s.colour << "\">" << s.label
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string to_json(const pipeline::ReportBundle& b) {
  ordered_json j;
  j["schema"] = pipeline::kReportSchema;
  j["version"] = PENROSE_VERSION;
  j["scenario"] = scenario_json(b.scenario);
  j["data"] = b.data_name;
  j["status"] = b.complete() ? "complete" : "failed";
  j["exit_code"] = b.exit_code();
  if (!b.complete()) j["error"] = {{"kind", to_string(*b.error_kind)}, {"message", b.error}};

  ordered_json traj;
  traj["steps"] = b.steps.size();
  for (const char* key : {"t", "mass", "area", "horizon", "components", "mass_tilde"}) traj[key] = ordered_json::array();
  for (const auto& s : b.steps) {
    traj["t"].push_back(num(s.t));
    traj["mass"].push_back(num(s.mass));
    traj["area"].push_back(num(s.area));
    traj["horizon"].push_back(num(s.horizon));
    traj["components"].push_back(s.components);
    traj["mass_tilde"].push_back(num(s.mass_tilde));
  }
  j["trajectory"] = traj;
  j["events"] = ordered_json::array();
  for (const auto& e : b.events) j["events"].push_back({{"t", num(e.t)}, {"from", num(e.from)}, {"to", num(e.to)}, {"what", e.what}});
  if (b.lsf)
    j["lsf"] = {{"m0", num(b.lsf->m0)},
                {"m_end", num(b.lsf->m_end)},
                {"integral_2_mass_tilde", num(b.lsf->integral)},
                {"tail", num(b.lsf->tail)},
                {"relative_residual", num(b.lsf->residual)}};
  j["reports"] = ordered_json::object();
  if (b.levelset) j["reports"]["levelset"] = mass_report_json(*b.levelset);
  if (b.spinor) j["reports"]["spinor"] = mass_report_json(*b.spinor);
  j["gates"] = ordered_json::array();
  for (const auto& g : b.gates)
    j["gates"].push_back({{"name", g.name}, {"value", num(g.value)}, {"threshold", num(g.threshold)}, {"passed", g.passed}});
  j["profiles"] = ordered_json::array();
  for (const auto& p : b.profiles) {
    ordered_json pj{{"method", p.method}, {"r", ordered_json::array()}, {"Q", ordered_json::array()}, {"P", ordered_json::array()}};
    for (std::size_t i = 0; i < p.r.size(); ++i) {
      pj["r"].push_back(num(p.r[i]));
      pj["Q"].push_back(num(p.Q[i]));
      pj["P"].push_back(num(p.P[i]));
    }
    j["profiles"].push_back(pj);
  }
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const pipeline::ReportBundle& b) {
  std::string out = "t,mass,area,horizon_r,components,mass_tilde,jumped\n";
  for (const auto& s : b.steps)
    out += number(s.t) + ',' + number(s.mass) + ',' + number(s.area) + ',' + number(s.horizon) + ',' +
           std::to_string(s.components) + ',' + number(s.mass_tilde) + ',' + (s.jumped ? "1" : "0") + '\n';
  return out;
}

std::string profile_csv(const pipeline::Profile& p) {
  std::string out = "r,Q,P\n";
  for (std::size_t i = 0; i < p.r.size(); ++i) out += number(p.r[i]) + ',' + number(p.Q[i]) + ',' + number(p.P[i]) + '\n';
  return out;
}

std::string trajectory_svg(const pipeline::ReportBundle& b) {
  Series m{"m(t) / m(0)", {}, {}, "#1f4e9c"}, a{"A(t) / A(0)", {}, {}, "#b0413e"};
  const double a0 = b.steps.empty() || b.steps.front().area == 0.0 ? 1.0 : b.steps.front().area;
  const double m0 = b.steps.empty() || b.steps.front().mass == 0.0 ? 1.0 : b.steps.front().mass;
  for (const auto& s : b.steps) {
    m.x.push_back(s.t);
    m.y.push_back(s.mass / m0);
    a.x.push_back(s.t);
    a.y.push_back(s.area / a0);
  }
  return line_plot(b.scenario.name + ": mass and horizon area", "t", {m, a});
}

std::string profile_svg(const pipeline::ReportBundle& b) {
  std::vector<Series> s;
  const std::array<const char*, 4> colours{"#1f4e9c", "#b0413e", "#2e7d32", "#6a1b9a"};
  std::size_t c = 0;
  for (const auto& p : b.profiles) {
    Series q{p.method + " Q", {}, {}, colours[c++ % colours.size()]};
    for (std::size_t i = 0; i < p.r.size(); ++i) {
      q.x.push_back(std::log10(p.r[i]));
      q.y.push_back(p.Q[i]);
    }
    s.push_back(std::move(q));
  }
  return line_plot(b.scenario.name + ": angular mean of Q", "log10 r", s);
}

std::vector<std::filesystem::path> emit_report(const pipeline::ReportBundle& b, const std::filesystem::path& dir,
                                               const std::vector<std::string>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  const std::string stem = b.scenario.name;
  auto put = [&](const std::string& file, const std::string& text) {
    const auto p = dir / file;
    write_file(p, text);
    written.push_back(p);
  };
  for (const auto& f : formats) {
    if (f == "json") {
      put(stem + ".report.json", to_json(b));
    } else if (f == "csv") {
      put(stem + ".trajectory.csv", trajectory_csv(b));
      for (const auto& p : b.profiles) put(stem + ".profile_" + p.method + ".csv", profile_csv(p));
    } else if (f == "svg") {
      put(stem + ".trajectory.svg", trajectory_svg(b));
      if (!b.profiles.empty()) put(stem + ".profile.svg", profile_svg(b));
    } else {
      fail(ErrorKind::ValidationError, "unknown report format '" + f + "'");
    }
  }
  return written;
}

}  // namespace penrose::report
