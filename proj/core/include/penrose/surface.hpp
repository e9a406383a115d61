#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "penrose/conformal_data.hpp"
#include "penrose/fields.hpp"
#include "penrose/jet.hpp"

namespace penrose::horizon {

// Closed meridian curve, star shaped about (0, center): r = h(theta) at
// cell-centred polar angles theta_k = (k + 1/2) pi / n.
struct Curve {
  double center = 0.0;
  std::vector<double> h;

  int size() const { return static_cast<int>(h.size()); }
  double theta(int k) const;
  double rho(int k) const;
  double z(int k) const;
  // Radius at an arbitrary angle by periodic cubic interpolation (the
  // curve is even about theta = 0 and theta = pi).
  double radius_at(double theta) const;
};

enum class SurfaceKind { Empty, Sphere, Axisymmetric };

struct Surface {
  SurfaceKind kind = SurfaceKind::Empty;
  double radius = 0.0;
  std::vector<Curve> components;
  MetricTag metric = MetricTag::Base;

  static Surface empty() { return {}; }
  static Surface sphere(double r);
  static Surface curves(std::vector<Curve> c);

  bool is_empty() const noexcept { return kind == SurfaceKind::Empty; }
  int component_count() const noexcept;
  // Point (rho, z) lies strictly inside the region bounded by the surface.
  bool contains(double rho, double z) const;
};

struct RadialRoots {
  std::vector<double> radii;  // descending
  std::optional<double> outermost;
};

// Roots of W + 2 r W' = 0 on [r_lo, r_hi]: the coordinate spheres that are
// minimal in W^4 delta. Scans inward from r_hi and bisects each bracket.
RadialRoots minimal_sphere_radius(const std::function<Jet(double)>& W, double r_lo, double r_hi,
                                  int points_per_decade = 200);
RadialRoots minimal_sphere_radius(const ConformalData& data);

// Area in (extra * U)^4 delta; `extra` defaults to 1.
using ExtraFactor = std::function<double(double rho, double z)>;
double surface_area(const Surface& s, const ConformalData& data, const ExtraFactor& extra = {});

bool encloses(const Surface& outer, const Surface& inner);

struct AxisymOptions {
  int angular_cells = 64;
  double tolerance = 1e-9;        // sup norm of the mean-curvature residual
  int max_iterations = 4000;
  double start_radius = 0.0;      // 0 picks a sphere well outside every pole
  double pinch_cells = 2.0;       // neck width that triggers a split
};

struct AxisymResult {
  Surface surface;
  double residual = 0.0;
  int iterations = 0;
  bool split = false;
};

// Outermost closed curve with vanishing mean curvature in W^4 delta, where
// W(rho, z) and its flat gradient are supplied by the caller.
struct FactorField {
  std::function<double(double, double)> value;
  std::function<Eigen::Vector2d(double, double)> gradient;
  std::vector<double> pole_z;  // centres used when a common horizon pinches
  double scale = 1.0;          // length scale (total mass)
};
FactorField factor_field(const ConformalData& data);

AxisymResult outermost_surface_axisym(const FactorField& W, const AxisymOptions& opt = {});
AxisymResult outermost_surface_axisym(const ConformalData& data, const AxisymOptions& opt = {});

// Relaxes every component of `guess` (a sphere counts as one curve about
// the origin) to a minimal curve. Throws HorizonNotConverged when a
// component pinches or the iteration stalls; collapsed components are
// dropped.
AxisymResult refine_surface_axisym(const Surface& guess, const FactorField& W, const AxisymOptions& opt = {});

// Mean curvature of a curve's surface of revolution in W^4 delta at each
// sample, with the normal pointing away from the curve's centre.
std::vector<double> mean_curvature(const Curve& c, const FactorField& W);

}  // namespace penrose::horizon
