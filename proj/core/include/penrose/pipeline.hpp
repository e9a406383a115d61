#pragma once

#include <optional>
#include <string>
#include <vector>

#include "penrose/errors.hpp"
#include "penrose/flow.hpp"
#include "penrose/mass_report.hpp"
#include "penrose/scenario.hpp"

namespace penrose::pipeline {

inline constexpr std::string_view kReportSchema = "penrose-flow-report/v1";

struct StepRow {
  double t = 0.0;
  double mass = 0.0;
  double area = 0.0;
  double horizon = 0.0;  // sphere radius, or outer extent of Sigma(t)
  int components = 0;
  double mass_tilde = 0.0;
  bool jumped = false;
};

// Angular means of the correction densities at each sampled radius.
struct Profile {
  std::string method;
  std::vector<double> r, Q, P;
};

// m(0) - m(t_max) against the trapezoid of 2 m~(t). The Schwarzschild tail
// m~(t_max) (for e^-2t decay) is reported; it cancels from the residual.
struct LsfCheck {
  double m0 = 0.0, m_end = 0.0;
  double integral = 0.0;
  double tail = 0.0;
  double residual = 0.0;  // |m0 - m_end - integral| / m0
};

struct Gate {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = true;
};

struct ReportBundle {
  scenario::Scenario scenario;
  std::string data_name;
  std::vector<StepRow> steps;
  std::vector<flow::FlowEvent> events;
  std::optional<MassReport> levelset, spinor;
  std::vector<Profile> profiles;
  std::optional<LsfCheck> lsf;
  std::vector<Gate> gates;
  // Set when a stage threw; the bundle then holds whatever finished.
  std::optional<ErrorKind> error_kind;
  std::string error;

  bool complete() const noexcept { return !error_kind.has_value(); }
  // 0 when every gate passes, 2 when a gate fails, 3 on solver failure.
  int exit_code() const noexcept;
};

using Progress = std::function<void(const std::string&)>;

ReportBundle run_pipeline(const scenario::Scenario& s, const Progress& progress = {});

LsfCheck lsf_check(const flow::FlowTrajectory& traj);

}  // namespace penrose::pipeline
