#pragma once

#include <cstddef>
#include <string>

namespace penrose {

enum class ChartKind { Radial, Axisymmetric };

// Coordinate patch carrying the asymptotically flat coordinate x. The radial
// chart is a log-spaced grid in r = |x|; the axisymmetric chart is a uniform
// grid in (rho, z) with the symmetry axis along z = x_1.
//
// Both charts reach the end through the inverted coordinate s = 1/r: the
// patch r >= compactify_from is also addressed as s in (0, 1/compactify_from].
class Chart {
 public:
  static Chart radial(double r_min, double r_max, int points_per_decade);
  static Chart axisymmetric(double rho_max, double z_min, double z_max, int n_rho, int n_z);

  ChartKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n1_) * n2_; }
  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }

  // radial: node i at r_i = r_min * exp(i * dlog)
  double r(int i) const;
  double log_spacing() const noexcept { return h1_; }
  double r_min() const noexcept { return lo1_; }
  double r_max() const noexcept { return hi1_; }
  bool puncture_flagged() const noexcept { return puncture_; }

  // axisymmetric: cell-centred in rho so no node sits on the axis
  double rho(int i) const { return lo1_ + (i + 0.5) * h1_; }
  double z(int j) const { return lo2_ + j * h2_; }
  double drho() const noexcept { return h1_; }
  double dz() const noexcept { return h2_; }
  double rho_max() const noexcept { return hi1_; }
  double z_min() const noexcept { return lo2_; }
  double z_max() const noexcept { return hi2_; }

  std::size_t index(int i, int j = 0) const noexcept {
    return static_cast<std::size_t>(j) * n1_ + static_cast<std::size_t>(i);
  }

  // Start of the compactified patch; the annulus [compactify_from, r_max]
  // is where physical and inverted coordinates overlap.
  double compactify_from() const noexcept { return compactify_from_; }

  std::string describe() const;

 private:
  Chart() = default;

  ChartKind kind_ = ChartKind::Radial;
  int n1_ = 0;
  int n2_ = 1;
  double lo1_ = 0.0, hi1_ = 0.0, h1_ = 0.0;
  double lo2_ = 0.0, hi2_ = 0.0, h2_ = 0.0;
  double compactify_from_ = 0.0;
  bool puncture_ = false;
};

}  // namespace penrose
