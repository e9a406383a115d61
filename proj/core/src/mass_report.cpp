#include "penrose/mass_report.hpp"

#include <cmath>
#include <numbers>

namespace penrose {

double MassReport::compute_gap(double m, double area, double int_rq, double int_p) {
  const double pi = std::numbers::pi;
  return m - std::sqrt(area / (16.0 * pi)) - (int_rq + int_p) / (16.0 * pi);
}

void MassReport::finalize() {
  area_term = std::sqrt(area / (16.0 * std::numbers::pi));
  gap = compute_gap(mass, area, integral_RQ, integral_P);
}

}  // namespace penrose
