#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "penrose/conformal_data.hpp"
#include "penrose/flow.hpp"
#include "penrose/levelset.hpp"

namespace penrose::scenario {

enum class DataKind { Schwarzschild, SmoothedPole, BrillLindquist, Table };
enum class Mode { LevelSet, Spinor, Both };

struct DataSpec {
  DataKind kind = DataKind::Schwarzschild;
  double mass = 1.0;  // schwarzschild, smoothed_pole
  double eps = 0.2;   // smoothed_pole
  double m1 = 0.5, m2 = 0.5, separation = 10.0;  // brill_lindquist
  std::filesystem::path table;                    // two columns r, U
  std::optional<double> r_fit;
};

struct Scenario {
  std::string name = "scenario";
  DataSpec data;
  int points_per_decade = 48;
  int mu_nodes = 8;
  flow::FlowConfig flow;
  Mode mode = Mode::Both;
  levelset::PFactor p_factor_j2 = levelset::PFactor::UMinusPhi;
  // Gates: level-set gap >= -tol m, spinor |gap| <= tol m, lsf residual <= tol m.
  double inequality_tolerance = 1e-4;
  double equality_tolerance = 0.03;
  double lsf_tolerance = 0.02;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> emit = {"json", "csv"};
  // Directory that relative table paths are resolved against.
  std::filesystem::path base_dir;
};

enum class Format { Ini, Json };

// Flat key = value text with [data], [chart], [flow], [pipeline] and
// [output] sections, or the same layout as nested JSON objects. Unknown
// keys are rejected.
Scenario parse_scenario(std::string_view text, Format format, std::string_view origin = "<string>");
// Format is picked from the extension (.json, otherwise INI).
Scenario load_scenario(const std::filesystem::path& path);

// Throws ValidationError listing every violated invariant.
void validate(const Scenario& s);

ConformalData build_data(const Scenario& s);

std::string_view to_string(DataKind k);
std::string_view to_string(Mode m);
Mode parse_mode(std::string_view text);

}  // namespace penrose::scenario
