#include "penrose/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <json.hpp>
#include <sstream>

#include "penrose/errors.hpp"

namespace penrose::scenario {

namespace {

struct Entry {
  std::string key;  // "section.key" or "key" at top level
  std::string value;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// 1-based line of `key` in INI text, 0 if not found.
int ini_line(std::string_view text, const std::string& dotted) {
  const auto dot = dotted.find('.');
  const std::string section = dot == std::string::npos ? "" : dotted.substr(0, dot);
  const std::string key = dot == std::string::npos ? dotted : dotted.substr(dot + 1);
  std::istringstream in{std::string(text)};
  std::string line, current;
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.size() > 1 && t.front() == '[' && t.back() == ']') {
      current = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (current == section && eq != std::string::npos && trim(std::string_view(t).substr(0, eq)) == key) return n;
  }
  return 0;
}

std::vector<Entry> read_ini(std::string_view text, std::string_view origin) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::ParseError, std::string(origin) + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  std::vector<Entry> out;
  for (const auto& [name, node] : tree) {
    if (node.empty()) out.push_back({name, trim(node.data())});
    else
      for (const auto& [key, leaf] : node) out.push_back({name + "." + key, trim(leaf.data())});
  }
  return out;
}

std::vector<Entry> read_json(std::string_view text, std::string_view origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::ParseError, std::string(origin) + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::ParseError, std::string(origin) + ": top level must be an object");
  auto scalar = [&](const std::string& key, const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean() || v.is_number()) return v.dump();
    if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) {
        if (!x.is_string()) fail(ErrorKind::ParseError, std::string(origin) + ": " + key + ": expected strings");
        joined += (joined.empty() ? "" : ",") + x.get<std::string>();
      }
      return joined;
    }
    fail(ErrorKind::ParseError, std::string(origin) + ": " + key + ": unsupported value");
  };
  std::vector<Entry> out;
  for (const auto& [name, node] : doc.items()) {
    if (node.is_object())
      for (const auto& [key, leaf] : node.items()) out.push_back({name + "." + key, scalar(name + "." + key, leaf)});
    else
      out.push_back({name, scalar(name, node)});
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    fail(ErrorKind::ParseError, key + ": expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    fail(ErrorKind::ParseError, key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorKind::ParseError, key + ": expected true or false, got '" + v + "'");
}

DataKind parse_kind(const std::string& v) {
  if (v == "schwarzschild") return DataKind::Schwarzschild;
  if (v == "smoothed_pole") return DataKind::SmoothedPole;
  if (v == "brill_lindquist") return DataKind::BrillLindquist;
  if (v == "table") return DataKind::Table;
  fail(ErrorKind::ParseError, "data.kind: unknown kind '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream in(v);
  for (std::string item; std::getline(in, item, ',');)
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

using Setter = std::function<void(Scenario&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](Scenario& s, auto&, auto& v) { s.name = v; }},
      {"data.kind", [](Scenario& s, auto&, auto& v) { s.data.kind = parse_kind(v); }},
      {"data.mass", [](Scenario& s, auto& k, auto& v) { s.data.mass = to_double(k, v); }},
      {"data.eps", [](Scenario& s, auto& k, auto& v) { s.data.eps = to_double(k, v); }},
      {"data.m1", [](Scenario& s, auto& k, auto& v) { s.data.m1 = to_double(k, v); }},
      {"data.m2", [](Scenario& s, auto& k, auto& v) { s.data.m2 = to_double(k, v); }},
      {"data.separation", [](Scenario& s, auto& k, auto& v) { s.data.separation = to_double(k, v); }},
      {"data.table", [](Scenario& s, auto&, auto& v) { s.data.table = v; }},
      {"data.r_fit", [](Scenario& s, auto& k, auto& v) { s.data.r_fit = to_double(k, v); }},
      {"chart.points_per_decade", [](Scenario& s, auto& k, auto& v) { s.points_per_decade = to_int(k, v); }},
      {"chart.mu_nodes", [](Scenario& s, auto& k, auto& v) { s.mu_nodes = to_int(k, v); }},
      {"chart.angular_cells", [](Scenario& s, auto& k, auto& v) { s.flow.angular_cells = to_int(k, v); }},
      {"chart.sources_per_component",
       [](Scenario& s, auto& k, auto& v) { s.flow.sources_per_component = to_int(k, v); }},
      {"flow.dt", [](Scenario& s, auto& k, auto& v) { s.flow.dt = to_double(k, v); }},
      {"flow.t_max", [](Scenario& s, auto& k, auto& v) { s.flow.t_max = to_double(k, v); }},
      {"flow.convergence_threshold",
       [](Scenario& s, auto& k, auto& v) { s.flow.convergence_threshold = to_double(k, v); }},
      {"flow.stop_on_convergence", [](Scenario& s, auto& k, auto& v) { s.flow.stop_on_convergence = to_bool(k, v); }},
      {"flow.enclosure_tolerance",
       [](Scenario& s, auto& k, auto& v) { s.flow.enclosure_tolerance = to_double(k, v); }},
      {"pipeline.mode", [](Scenario& s, auto&, auto& v) { s.mode = parse_mode(v); }},
      {"pipeline.p_factor_j2",
       [](Scenario& s, auto& k, auto& v) {
         if (v == "u_minus_phi") s.p_factor_j2 = levelset::PFactor::UMinusPhi;
         else if (v == "phi") s.p_factor_j2 = levelset::PFactor::Phi;
         else fail(ErrorKind::ParseError, k + ": expected phi or u_minus_phi, got '" + v + "'");
       }},
      {"pipeline.inequality_tolerance",
       [](Scenario& s, auto& k, auto& v) { s.inequality_tolerance = to_double(k, v); }},
      {"pipeline.equality_tolerance", [](Scenario& s, auto& k, auto& v) { s.equality_tolerance = to_double(k, v); }},
      {"pipeline.lsf_tolerance", [](Scenario& s, auto& k, auto& v) { s.lsf_tolerance = to_double(k, v); }},
      {"output.dir", [](Scenario& s, auto&, auto& v) { s.out_dir = v; }},
      {"output.emit", [](Scenario& s, auto&, auto& v) { s.emit = split_list(v); }},
  };
  return table;
}

std::vector<double> read_table(const std::filesystem::path& path, std::vector<double>& r) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open factor table " + path.string());
  std::vector<double> u;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream row(t);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
      fail(ErrorKind::ParseError, path.string() + ":" + std::to_string(n) + ": expected 'r, U'");
    if (n == 1 && trim(a) == "r") continue;
    r.push_back(to_double(path.string() + ":" + std::to_string(n), trim(a)));
    u.push_back(to_double(path.string() + ":" + std::to_string(n), trim(b)));
  }
  return u;
}

std::filesystem::path table_path(const Scenario& s) {
  return s.data.table.is_absolute() || s.base_dir.empty() ? s.data.table : s.base_dir / s.data.table;
}

}  // namespace

std::string_view to_string(DataKind k) {
  switch (k) {
    case DataKind::Schwarzschild: return "schwarzschild";
    case DataKind::SmoothedPole: return "smoothed_pole";
    case DataKind::BrillLindquist: return "brill_lindquist";
    case DataKind::Table: return "table";
  }
  return "unknown";
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::LevelSet: return "levelset";
    case Mode::Spinor: return "spinor";
    case Mode::Both: return "both";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  if (text == "levelset") return Mode::LevelSet;
  if (text == "spinor") return Mode::Spinor;
  if (text == "both") return Mode::Both;
  fail(ErrorKind::ParseError, "pipeline.mode: expected levelset, spinor or both, got '" + std::string(text) + "'");
}

Scenario parse_scenario(std::string_view text, Format format, std::string_view origin) {
  const auto entries = format == Format::Json ? read_json(text, origin) : read_ini(text, origin);
  Scenario s;
  for (const Entry& e : entries) {
    const auto it = setters().find(e.key);
    const std::string where =
        std::string(origin) + (format == Format::Ini ? ":" + std::to_string(ini_line(text, e.key)) : "");
    if (it == setters().end()) fail(ErrorKind::ParseError, where + ": unknown key '" + e.key + "'");
    try {
      it->second(s, e.key, e.value);
    } catch (const Error& err) {
      fail(err.kind(), where + ": " + err.detail());
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open scenario " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const Format f = path.extension() == ".json" ? Format::Json : Format::Ini;
  Scenario s = parse_scenario(buf.str(), f, path.string());
  s.base_dir = path.parent_path();
  validate(s);
  return s;
}

void validate(const Scenario& s) {
  std::vector<std::string> bad;
  auto need = [&](bool ok, std::string what) {
    if (!ok) bad.push_back(std::move(what));
  };
  switch (s.data.kind) {
    case DataKind::Schwarzschild: need(s.data.mass > 0.0, "data.mass must be > 0"); break;
    case DataKind::SmoothedPole:
      need(s.data.mass > 0.0, "data.mass must be > 0");
      need(s.data.eps > 0.0, "data.eps must be > 0");
      break;
    case DataKind::BrillLindquist:
      need(s.data.m1 > 0.0 && s.data.m2 > 0.0, "data.m1 and data.m2 must be > 0");
      need(s.data.separation > 0.0, "data.separation must be > 0");
      break;
    case DataKind::Table: {
      if (s.data.table.empty()) {
        bad.push_back("data.table is required for kind = table");
        break;
      }
      std::vector<double> r;
      std::vector<double> u;
      try {
        u = read_table(table_path(s), r);
      } catch (const Error& e) {
        bad.push_back(e.detail());
        break;
      }
      for (std::size_t i = 0; i < u.size(); ++i)
        if (!(u[i] > 0.0)) {
          bad.push_back("data.table: non-positive U sample at r = " + std::to_string(r[i]));
          break;
        }
      need(u.size() >= 8, "data.table needs at least 8 rows");
      break;
    }
  }
  need(s.points_per_decade >= 32, "chart.points_per_decade must be >= 32");
  need(s.mu_nodes >= 2, "chart.mu_nodes must be >= 2");
  need(s.flow.angular_cells >= 16, "chart.angular_cells must be >= 16");
  need(s.flow.sources_per_component >= 8, "chart.sources_per_component must be >= 8");
  need(s.flow.dt > 0.0 && s.flow.dt <= 0.1, "flow.dt must lie in (0, 0.1]");
  need(s.flow.t_max > 0.0, "flow.t_max must be > 0");
  need(s.flow.convergence_threshold > 0.0, "flow.convergence_threshold must be > 0");
  need(s.flow.enclosure_tolerance >= 0.0, "flow.enclosure_tolerance must be >= 0");
  need(s.inequality_tolerance > 0.0 && s.equality_tolerance > 0.0 && s.lsf_tolerance > 0.0,
       "pipeline tolerances must be > 0");
  for (const auto& e : s.emit) need(e == "json" || e == "csv" || e == "svg", "output.emit: unknown format '" + e + "'");
  if (bad.empty()) return;
  std::string msg = "invalid scenario '" + s.name + "':";
  for (const auto& b : bad) msg += "\n  - " + b;
  fail(ErrorKind::ValidationError, msg);
}

ConformalData build_data(const Scenario& s) {
  switch (s.data.kind) {
    case DataKind::Schwarzschild: return ConformalData::schwarzschild(s.data.mass);
    case DataKind::SmoothedPole: return ConformalData::smoothed_pole(s.data.mass, s.data.eps);
    case DataKind::BrillLindquist: return ConformalData::brill_lindquist(s.data.m1, s.data.m2, s.data.separation);
    case DataKind::Table: {
      std::vector<double> r;
      auto u = read_table(table_path(s), r);
      return ConformalData::from_radial_table(std::move(r), std::move(u), s.data.r_fit);
    }
  }
  fail(ErrorKind::ValidationError, "unknown data kind");
}

}  // namespace penrose::scenario
