#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "penrose/errors.hpp"
#include "penrose/pipeline.hpp"
#include "penrose/report.hpp"
#include "penrose/scenario.hpp"

namespace {

// PENROSE_LOG: 0 silent, 1 progress (default), 2 also echoes the scenario.
int log_level() {
  const char* v = std::getenv("PENROSE_LOG");
  return v ? std::atoi(v) : 1;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(',', start);
    const auto item = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!item.empty()) out.push_back(item);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

void print_report(const penrose::MassReport& r) {
  std::cout << "  " << r.method << " [" << r.status << "]: m = " << penrose::report::number(r.mass)
            << ", sqrt(A/16pi) = " << penrose::report::number(r.area_term)
            << ", int RQ = " << penrose::report::number(r.integral_RQ)
            << ", int P = " << penrose::report::number(r.integral_P) << ", gap = " << penrose::report::number(r.gap)
            << "\n";
  if (!r.note.empty()) std::cout << "    note: " << r.note << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Refined Penrose inequality pipelines on conformally flat initial data"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the flow and correction pipelines for a scenario file");
  std::string path, out_dir, mode, emit;
  std::optional<int> resolution;
  std::optional<double> dt, t_max;
  run->add_option("scenario", path, "Scenario file (.ini or .json)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--mode", mode, "levelset, spinor or both")->check(CLI::IsMember({"levelset", "spinor", "both"}));
  run->add_option("--resolution", resolution, "Radial points per decade");
  run->add_option("--dt", dt, "Flow time step");
  run->add_option("--t-max", t_max, "Final flow time");
  run->add_option("--emit", emit, "Comma separated formats: json, csv, svg");

  CLI11_PARSE(app, argc, argv);

  const int verbosity = log_level();
  penrose::scenario::Scenario s;
  try {
    s = penrose::scenario::load_scenario(path);
    if (!out_dir.empty()) s.out_dir = out_dir;
    if (!mode.empty()) s.mode = penrose::scenario::parse_mode(mode);
    if (resolution) s.points_per_decade = *resolution;
    if (dt) s.flow.dt = *dt;
    if (t_max) s.flow.t_max = *t_max;
    if (!emit.empty()) s.emit = split(emit);
    penrose::scenario::validate(s);
  } catch (const penrose::Error& e) {
    std::cerr << "penrose: " << e.what() << "\n";
    return 1;
  }

  penrose::pipeline::Progress progress;
  if (verbosity >= 1) progress = [](const std::string& m) { std::cerr << "[penrose] " << m << "\n"; };
  if (verbosity >= 2) std::cerr << "[penrose] scenario " << s.name << " from " << path << "\n";

  const auto bundle = penrose::pipeline::run_pipeline(s, progress);
  try {
    for (const auto& p : penrose::report::emit_report(bundle, s.out_dir, s.emit))
      if (verbosity >= 1) std::cerr << "[penrose] wrote " << p.string() << "\n";
  } catch (const penrose::Error& e) {
    std::cerr << "penrose: " << e.what() << "\n";
    return 3;
  }

  std::cout << s.name << " (" << bundle.data_name << ")\n";
  if (!bundle.complete()) std::cout << "  failed: " << penrose::to_string(*bundle.error_kind) << ": " << bundle.error << "\n";
  if (bundle.levelset) print_report(*bundle.levelset);
  if (bundle.spinor) print_report(*bundle.spinor);
  for (const auto& g : bundle.gates)
    std::cout << "  gate " << g.name << ": " << (g.passed ? "pass" : "FAIL") << " (" << penrose::report::number(g.value)
              << " vs " << penrose::report::number(g.threshold) << ")\n";
  return bundle.exit_code();
}
