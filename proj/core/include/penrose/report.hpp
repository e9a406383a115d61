#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "penrose/pipeline.hpp"

namespace penrose::report {

// Shortest decimal form that reads back to the same double.
std::string number(double x);

std::string to_json(const pipeline::ReportBundle& b);
// Columns t, mass, area, horizon_r, components, mass_tilde, jumped.
std::string trajectory_csv(const pipeline::ReportBundle& b);
// Columns r, Q, P.
std::string profile_csv(const pipeline::Profile& p);
std::string trajectory_svg(const pipeline::ReportBundle& b);
std::string profile_svg(const pipeline::ReportBundle& b);

// Writes <name>.report.json, <name>.trajectory.csv, <name>.profile_<method>.csv
// and the SVG plots for the requested formats; returns the paths written.
std::vector<std::filesystem::path> emit_report(const pipeline::ReportBundle& b, const std::filesystem::path& dir,
                                               const std::vector<std::string>& formats);

}  // namespace penrose::report
