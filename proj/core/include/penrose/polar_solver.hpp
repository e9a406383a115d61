#pragma once

#include <Eigen/Core>
#include <vector>

#include "penrose/conformal_data.hpp"
#include "penrose/elliptic.hpp"

namespace penrose::elliptic {

enum class PolarMethod { ConjugateGradient, SparseCholesky };

struct PolarGridOptions {
  int n_s = 256;
  int n_theta = 64;
  double tolerance = 1e-10;
  int max_iterations = 100000;
  PolarMethod method = PolarMethod::ConjugateGradient;
};

// Exterior of the sphere r = R on the compactified grid s = R / r in [0, 1]
// (s = 0 is the end) times cell-centred polar angle. The unknown is the
// remainder w = f - f0 with f0 = c (constant asymptote) or c a z / U
// (linear asymptote), so w vanishes at s = 0.
class PolarSolution {
 public:
  PolarSolution(const ConformalData& data, double R, int n_s, int n_theta, AsymptoteSpec asym);

  double R() const noexcept { return R_; }
  int n_s() const noexcept { return n_s_; }
  int n_theta() const noexcept { return n_theta_; }
  double s(int i) const noexcept { return static_cast<double>(i) / n_s_; }
  double theta(int j) const noexcept;
  double& w(int i, int j) { return w_[static_cast<std::size_t>(i) * n_theta_ + j]; }
  double w(int i, int j) const { return w_[static_cast<std::size_t>(i) * n_theta_ + j]; }

  double base_value(double rho, double z) const;
  Eigen::Vector2d base_gradient(double rho, double z) const;

  double value(double rho, double z) const;
  Eigen::Vector2d gradient(double rho, double z) const;

 private:
  // Remainder and its (d/ds, d/dtheta) by bicubic Lagrange interpolation.
  Eigen::Vector3d interpolate(double s, double theta) const;

  ConformalData data_;
  double R_;
  int n_s_, n_theta_;
  AsymptoteSpec asym_;
  std::vector<double> w_;
};

// Discrete Delta_g f = 0 outside bc.surface (a sphere) with Dirichlet or
// Robin data, solved by preconditioned conjugate gradients.
HarmonicField solve_exterior_harmonic_grid(const ConformalData& data, const BoundarySpec& bc,
                                           const AsymptoteSpec& asym, const PolarGridOptions& opt = {});

}  // namespace penrose::elliptic
