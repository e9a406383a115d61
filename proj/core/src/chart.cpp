#include "penrose/chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "penrose/errors.hpp"

namespace penrose {

Chart Chart::radial(double r_min, double r_max, int points_per_decade) {
  if (!(r_min > 0.0) || !(r_max > r_min)) {
    fail(ErrorKind::DomainError, "radial chart needs 0 < r_min < r_max");
  }
  if (points_per_decade < 2) fail(ErrorKind::DomainError, "radial chart needs >= 2 points per decade");
  Chart c;
  c.kind_ = ChartKind::Radial;
  const double decades = std::log10(r_max / r_min);
  c.n1_ = static_cast<int>(std::ceil(decades * points_per_decade)) + 1;
  c.n2_ = 1;
  c.lo1_ = r_min;
  c.hi1_ = r_max;
  c.h1_ = std::log(r_max / r_min) / (c.n1_ - 1);
  c.compactify_from_ = std::sqrt(r_min * r_max);
  c.puncture_ = false;
  return c;
}

Chart Chart::axisymmetric(double rho_max, double z_min, double z_max, int n_rho, int n_z) {
  if (!(rho_max > 0.0) || !(z_max > z_min) || n_rho < 4 || n_z < 4) {
    fail(ErrorKind::DomainError, "axisymmetric chart needs positive extents and >= 4 nodes per axis");
  }
  Chart c;
  c.kind_ = ChartKind::Axisymmetric;
  c.n1_ = n_rho;
  c.n2_ = n_z;
  c.lo1_ = 0.0;
  c.hi1_ = rho_max;
  c.h1_ = rho_max / n_rho;
  c.lo2_ = z_min;
  c.hi2_ = z_max;
  c.h2_ = (z_max - z_min) / (n_z - 1);
  c.compactify_from_ = 0.5 * std::min(rho_max, std::min(-z_min, z_max));
  return c;
}

double Chart::r(int i) const { return lo1_ * std::exp(i * h1_); }

std::string Chart::describe() const {
  std::ostringstream os;
  if (kind_ == ChartKind::Radial) {
    os << "radial r in [" << lo1_ << ", " << hi1_ << "], " << n1_ << " nodes";
  } else {
    os << "axisymmetric rho in [0, " << hi1_ << "], z in [" << lo2_ << ", " << hi2_ << "], " << n1_ << "x"
       << n2_;
  }
  return os.str();
}

}  // namespace penrose
