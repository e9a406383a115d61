#pragma once

#include <map>
#include <string>

namespace penrose {

// One assembled mass (in)equality m vs sqrt(A/16 pi) + (int RQ + int P)/16 pi.
struct MassReport {
  std::string method;  // "levelset" or "spinor"
  double mass = 0.0;
  double area = 0.0;
  double area_term = 0.0;  // sqrt(A / 16 pi)
  double integral_RQ = 0.0;
  double integral_P = 0.0;
  double gap = 0.0;
  double tail_estimate = 0.0;  // contribution expected beyond t_max
  // "verified", "informational" (hypothesis not met) or "degenerate".
  std::string status = "verified";
  std::string note;
  int guard_events = 0;
  double max_solver_residual = 0.0;
  std::map<std::string, std::string> provenance;

  // gap = m - sqrt(A/16 pi) - (int RQ + int P) / 16 pi
  static double compute_gap(double m, double area, double int_rq, double int_p);
  void finalize();
};

}  // namespace penrose
