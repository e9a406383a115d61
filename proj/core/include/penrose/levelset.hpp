#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "penrose/elliptic.hpp"
#include "penrose/flow.hpp"
#include "penrose/mass_report.hpp"

namespace penrose::levelset {

// Conformal factor used in the j = 2 Hessian correction of P.
enum class PFactor { Phi, UMinusPhi };

struct LevelSetConfig {
  PFactor p_factor_j2 = PFactor::UMinusPhi;
  double guard = 1e-8;          // relative threshold for |grad U_j| and u - phi
  int mu_nodes = 8;             // Gauss-Legendre nodes in cos(theta) on [0, 1]
  int points_per_decade = 48;   // radial quadrature
  double r_far_factor = 2e3;    // outer radius in units of the mass scale
};

// phi_t, p_t, q_t at one flow time and the assembled
// U_1 = (p + q) / phi,  U_2 = (p - q) / (u - phi),  both of the form H(r) x_1.
struct LevelSetSlice {
  double t = 0.0;
  double R = 0.0;  // radius of Sigma(t), 0 when empty
  double A = 1.0, B = 0.0;
  elliptic::HarmonicField phi, p, q;
  bool u2_degenerate = false;  // p - q vanishes identically

  Jet u(double r) const;
  Jet phi_profile(double r) const;
  // H_j with U_j = H_j(r) x_1.
  Jet H1(double r) const;
  Jet H2(double r) const;
};

elliptic::HarmonicField solve_phi(const flow::FlowTrajectory& traj, std::size_t k);
std::pair<elliptic::HarmonicField, elliptic::HarmonicField> solve_pq(const flow::FlowTrajectory& traj, std::size_t k);
LevelSetSlice assemble_slice(const flow::FlowTrajectory& traj, std::size_t k, elliptic::HarmonicField phi,
                             elliptic::HarmonicField p, elliptic::HarmonicField q);
LevelSetSlice solve_slice(const flow::FlowTrajectory& traj, std::size_t k);
std::vector<LevelSetSlice> solve_slices(const flow::FlowTrajectory& traj);

// Integrands of Q and P at (r, mu = cos theta) for one slice.
struct Density {
  double grad1 = 0.0, grad2 = 0.0;  // |grad U_j|_g
  double p1 = 0.0, p2 = 0.0;        // |T_j|^2_g / |grad U_j|_g
  int guards = 0;
};
Density density(const LevelSetSlice& s, const ConformalData& data, double r, double mu, const LevelSetConfig& cfg);

// Q and P sampled on r x mu with the quadrature weights used for the
// volume integrals. Q and P vanish inside Sigma(0).
struct CorrectionFields {
  std::vector<double> r;
  std::vector<double> mu, mu_weight;  // Gauss-Legendre on [0, 1]
  Eigen::MatrixXd Q, P;               // rows r, columns mu
  std::vector<double> exit_time;      // t(x) per radius
  std::vector<double> volume_weight;  // r^2 U^6 dr (radial part of dV)
  int guard_events = 0;
  double integral_RQ = 0.0, integral_P = 0.0;
  // Estimated contributions from t > t_max at points never swallowed.
  double tail_RQ = 0.0, tail_P = 0.0;

  // Angular means at each radius.
  std::vector<double> Q_mean() const;
  std::vector<double> P_mean() const;
};

CorrectionFields accumulate_QP(const flow::FlowTrajectory& traj, const std::vector<LevelSetSlice>& slices,
                               const LevelSetConfig& cfg = {});
// Gauss-Legendre nodes and weights on [0, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int n);

// Q and P at single points, by the same time quadrature.
std::pair<double, double> evaluate_QP(const flow::FlowTrajectory& traj, const std::vector<LevelSetSlice>& slices,
                                      double r, double mu, const LevelSetConfig& cfg = {});

// (1/16 pi) int |grad^2 U|^2 / |grad U| + R |grad U| dV for U = c H(r) x_1.
double mass_lower_bound_levelset(const ConformalData& data, const std::function<Jet(double)>& H,
                                 double r_inner = 0.0, const LevelSetConfig& cfg = {});

MassReport verify_inequality_levelset(const ConformalData& data, const CorrectionFields& fields,
                                      const flow::FlowTrajectory& traj);

// Grid path: phi, p, q solved on the compactified polar grid at every slice.
struct GridConfig {
  int n_s = 256;
  int n_theta = 64;
};
std::vector<double> evaluate_Q_grid(const flow::FlowTrajectory& traj, const std::vector<Eigen::Vector2d>& points,
                                    const GridConfig& grid = {}, const LevelSetConfig& cfg = {});

}  // namespace penrose::levelset
