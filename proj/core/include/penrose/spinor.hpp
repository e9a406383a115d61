#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <vector>

#include "penrose/clifford.hpp"
#include "penrose/fields.hpp"
#include "penrose/flow.hpp"
#include "penrose/levelset.hpp"
#include "penrose/mass_report.hpp"

namespace penrose::spinor {

// Spinor field on a uniform Cartesian box, used for the finite-difference
// Dirac operator. Node (i, j, k) sits at origin + h (i, j, k).
struct SpinorGrid {
  int n = 0;
  double h = 0.0;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  MetricTag metric = MetricTag::Flat;
  std::vector<Spinor> values;

  SpinorGrid() = default;
  SpinorGrid(int n, double h, Eigen::Vector3d origin);
  std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(k) * n + j) * n + i; }
  Eigen::Vector3d point(int i, int j, int k) const { return origin + h * Eigen::Vector3d(i, j, k); }
  Spinor& at(int i, int j, int k) { return values[index(i, j, k)]; }
  const Spinor& at(int i, int j, int k) const { return values[index(i, j, k)]; }

  static SpinorGrid sample(int n, double h, Eigen::Vector3d origin, const std::function<Spinor(const Eigen::Vector3d&)>& f);
};

using ScalarSampler = std::function<double(const Eigen::Vector3d&)>;

// Flat Dirac operator sum_j e_j . d_j by second-order differences
// (one-sided at the box faces).
SpinorGrid dirac_flat(const CliffordFrame& frame, const SpinorGrid& psi);
// Dirac operator of phi^4 delta by conformal reduction:
// D psi = phi^-4 D_flat(phi^2 psi).
SpinorGrid dirac_apply(const CliffordFrame& frame, const SpinorGrid& psi, const ScalarSampler& phi);
// Same operator from the spin connection of phi^4 delta:
// D psi = phi^-2 (D_flat psi + 2 grad log phi . psi), derivatives of phi by differences.
SpinorGrid dirac_covariant(const CliffordFrame& frame, const SpinorGrid& psi, const ScalarSampler& phi);
// Max-norm difference on the interior nodes.
double max_difference(const SpinorGrid& a, const SpinorGrid& b, int margin = 1);

// Spinor with its flat partial derivatives at a point.
struct SpinorJet {
  Spinor v = Spinor::Zero();
  std::array<Spinor, 3> d{Spinor::Zero(), Spinor::Zero(), Spinor::Zero()};
};
using SpinorField = std::function<SpinorJet(const Eigen::Vector3d&)>;

// |nabla psi|^2 in the metric U^4 delta from flat data:
// U^-4 sum_j |d_j psi - (d_j log U + e_j . grad log U) psi|^2.
double covariant_gradient_norm2(const CliffordFrame& frame, const SpinorJet& psi, const Eigen::Vector3d& dlogU,
                                double U);

struct SpinorConfig {
  double guard = 1e-8;
  int mu_nodes = 16;           // Gauss-Legendre nodes on [-1, 1]
  int azimuth_nodes = 8;       // witten_mass only
  int points_per_decade = 48;
  double r_far_factor = 1e5;
  Spinor psi0 = Spinor(1.0, 0.0);
};

// (1/16 pi) int 4 |nabla psi|^2 + R |psi|^2 dV over r > r_inner on radial data.
double witten_mass(const ConformalData& data, const SpinorField& psi, double r_inner = 0.0,
                   const SpinorConfig& cfg = {});
// psi = U^-2 psi0 (Dirac-null by conformal covariance).
SpinorField conformal_constant_spinor(const ConformalData& data, const Spinor& psi0);

// Boundary spinors p_t, q_t and the weights phi_{t,0} = phi_t, phi_{t,1} = u_t - phi_t.
// On radial data p, q = U^-2 a^2 e^-2t (1 +- (R/r)^2 sigma . x) psi0, the
// pullback of flat Dirac-null spinors.
struct SpinorSlice {
  double t = 0.0;
  double R = 0.0;
  double A = 1.0, B = 0.0;
  double a = 1.0;
  Spinor psi0 = Spinor(1.0, 0.0);
  elliptic::HarmonicField phi;
  double boundary_residual = 0.0;  // sup |i nu . p - p| + |i nu . q + q| on Sigma

  SpinorJet p(const Eigen::Vector3d& x) const;
  SpinorJet q(const Eigen::Vector3d& x) const;
  // psi^l = (p + (-1)^l q) / 2
  SpinorJet psi(int l, const Eigen::Vector3d& x) const;
  Jet weight(int l, double r) const;
  const ConformalData& data() const;
};

SpinorSlice solve_boundary_spinors(const flow::FlowTrajectory& traj, std::size_t k, const SpinorConfig& cfg = {});
std::vector<SpinorSlice> solve_spinor_slices(const flow::FlowTrajectory& traj, const SpinorConfig& cfg = {});

struct SpinorDensity {
  double q0 = 0.0, q1 = 0.0;  // 2 phi_l^-2 |psi^l|^2
  double p0 = 0.0, p1 = 0.0;  // 8 phi_l^2 sum_j |...|^2
  int guards = 0;
};
SpinorDensity spinor_density(const SpinorSlice& s, double r, double mu, const SpinorConfig& cfg = {});

levelset::CorrectionFields accumulate_QP_spinor(const flow::FlowTrajectory& traj,
                                                const std::vector<SpinorSlice>& slices, const SpinorConfig& cfg = {});
std::pair<double, double> evaluate_QP_spinor(const flow::FlowTrajectory& traj, const std::vector<SpinorSlice>& slices,
                                             double r, double mu, const SpinorConfig& cfg = {});

MassReport verify_equality_spinor(const ConformalData& data, const levelset::CorrectionFields& fields,
                                  const flow::FlowTrajectory& traj);

}  // namespace penrose::spinor
