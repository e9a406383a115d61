#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "penrose/jet.hpp"

namespace penrose {

// U -> a + b/r at the end. `residual` is the rms misfit when the pair was
// obtained by least squares rather than known in closed form.
struct Asymptotics {
  double a = 1.0;
  double b = 0.0;
  bool fitted = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

// A pole m/(2 sqrt(|x - c|^2 + eps^2)) centred on the symmetry axis.
// eps = 0 is a genuine puncture; eps > 0 gives a smooth, R >= 0 core.
struct Pole {
  double z = 0.0;
  double mass = 0.0;
  double eps = 0.0;
};

class CubicSpline;

// Conformally flat metric g = U^4 delta. Builtin families are sums of poles;
// tabulated radial profiles are interpolated with a natural cubic spline and
// continued by their fitted a + b/r tail.
class ConformalData {
 public:
  static ConformalData flat();
  static ConformalData schwarzschild(double m);
  static ConformalData smoothed_pole(double m, double eps);
  static ConformalData brill_lindquist(double m1, double m2, double separation);
  // Tabulated U(r); the fit window for (a, b) is [r_fit, 2 r_fit].
  static ConformalData from_radial_table(std::vector<double> r, std::vector<double> u,
                                         std::optional<double> r_fit = std::nullopt,
                                         double fit_tolerance = 1e-6);

  bool is_radial() const noexcept { return radial_; }
  // True when the flat Laplacian of U vanishes away from the pole centres.
  bool is_harmonic() const noexcept { return harmonic_; }
  bool is_tabulated() const noexcept { return static_cast<bool>(table_); }
  // Smallest radius at which the radial profile is defined (0 for poles).
  double radial_domain_min() const;

  const Asymptotics& asymptotics() const noexcept { return asym_; }
  std::span<const Pole> poles() const noexcept { return poles_; }
  const std::string& name() const noexcept { return name_; }

  // Radial profile U(r) with derivatives; only valid when is_radial().
  Jet radial(double r) const;
  double factor(double r) const { return radial(r).v; }

  // Point evaluation in the (rho, z) half plane.
  double factor(double rho, double z) const;
  // Flat gradient (d/drho, d/dz).
  Eigen::Vector2d gradient(double rho, double z) const;
  // Flat Laplacian Delta_delta U.
  double flat_laplacian(double rho, double z) const;
  // R = -8 U^-5 Delta_delta U evaluated from the closed form.
  double scalar_curvature(double rho, double z) const;

  double total_pole_mass() const;

 private:
  ConformalData() = default;

  std::string name_;
  bool radial_ = true;
  bool harmonic_ = true;
  Asymptotics asym_;
  std::vector<Pole> poles_;
  std::shared_ptr<const CubicSpline> table_;
};

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);
  Jet operator()(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  std::span<const double> xs() const { return x_; }
  std::span<const double> ys() const { return y_; }

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives at nodes
};

// Least-squares fit of U = a + b/r over samples; returns residual rms.
Asymptotics fit_asymptotics(std::span<const double> r, std::span<const double> u);

}  // namespace penrose
