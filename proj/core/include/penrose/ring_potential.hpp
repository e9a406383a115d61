#pragma once

#include <Eigen/Core>
#include <vector>

namespace penrose::elliptic {

// Flat-harmonic potential of a uniformly charged ring of radius a at height
// z0, normalised to 1/r at large distance; a = 0 is a point charge on the
// axis. Returns (value, d/drho, d/dz).
Eigen::Vector3d ring_potential(double a, double z0, double rho, double z);

struct RingSource {
  double a = 0.0;
  double z = 0.0;
  double charge = 0.0;
};

// Superposition of ring sources: an axisymmetric flat-harmonic function
// decaying like (sum of charges) / r.
class RingExpansion {
 public:
  std::vector<RingSource> sources;

  double value(double rho, double z) const;
  Eigen::Vector2d gradient(double rho, double z) const;
  double monopole() const;

  void add(const RingExpansion& other, double weight);
};

struct FitResult {
  RingExpansion expansion;
  double residual = 0.0;  // max misfit at the collocation points
};

// Least-squares charges for fixed source positions so that the expansion
// matches `values` at the collocation points (rho_i, z_i).
FitResult fit_ring_charges(const std::vector<RingSource>& positions, const std::vector<Eigen::Vector2d>& points,
                           const std::vector<double>& values);

}  // namespace penrose::elliptic
