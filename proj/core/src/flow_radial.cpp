#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "flow_internal.hpp"
#include "penrose/errors.hpp"

namespace penrose::flow {

namespace {

double length_scale(const ConformalData& d) { return std::max(d.asymptotics().b, 1e-6); }

}  // namespace

namespace radial {

std::optional<double> horizon(const elliptic::RadialBasis& basis, double A, double B, double r_floor) {
  const ConformalData& d = basis.data();
  const double scale = length_scale(d);
  const double lo = r_floor > 0.0 ? r_floor * (1.0 - 1e-9) : std::max(1e-4 * scale, d.radial_domain_min());
  const double hi = 1e3 * std::max(scale, lo);
  auto W = [&](double r) {
    const Jet U = d.radial(r);
    return B == 0.0 ? A * U : U * (A + B * basis.K(r));
  };
  const auto roots = horizon::minimal_sphere_radius(W, lo, hi);
  if (!roots.outermost) return std::nullopt;
  return std::max(*roots.outermost, r_floor);
}

double mass(const ConformalData& data, double A, double B) {
  const double a = data.asymptotics().a, b = data.asymptotics().b;
  return 2.0 * A * (a * b * A + B);
}

}  // namespace radial

namespace detail {

namespace {

// Velocity coefficients: v = alpha + beta K outside Sigma.
struct Coeffs {
  double alpha, beta;
};

Coeffs velocity(double t, double R, const elliptic::RadialBasis& basis) {
  const double e = std::exp(-t);
  if (R <= 0.0) return {-e, 0.0};
  return {-e, e / basis.K(R).v};
}

void diagnostics(FlowState& s, const FlowTrajectory& traj) {
  const ConformalData& d = traj.data();
  const auto& basis = *traj.basis();
  const double R = s.horizon_radius();
  const double a = d.asymptotics().a, b = d.asymptotics().b;
  s.mass = radial::mass(d, s.A, s.B);
  s.components = R > 0.0 ? 1 : 0;
  auto W = [&](double r) { return d.factor(r) * (s.A + (s.B == 0.0 ? 0.0 : s.B * basis.K(r).v)); };
  s.area = R > 0.0 ? 4.0 * std::numbers::pi * R * R * std::pow(W(R), 4) : 0.0;

  // phi_t = e^-t + beta K with phi = u/2 on Sigma; its mass is 2 a' b'.
  const double e = std::exp(-s.t);
  double beta_phi = 0.0;
  if (R > 0.0) {
    const double K = basis.K(R).v;
    beta_phi = (0.5 * (s.A + s.B * K) - e) / K;
  }
  s.mass_tilde = 2.0 * (a * e) * (b * e + beta_phi / a);

  // Distance of W from the closest alpha + beta / r outside Sigma.
  const double r0 = std::max(R, length_scale(d));
  std::vector<double> rr, ww;
  for (int k = 0; k <= 40; ++k) {
    const double r = r0 * std::pow(1e3, k / 40.0);
    rr.push_back(r);
    ww.push_back(W(r));
  }
  const Asymptotics fit = fit_asymptotics(rr, ww);
  double dev = 0.0;
  for (std::size_t k = 0; k < rr.size(); ++k)
    dev = std::max(dev, std::abs(ww[k] - fit.a - fit.b / rr[k]) / std::abs(ww[k]));
  s.schwarzschild_deviation = dev;
}

}  // namespace

FlowState radial_initial_state(const FlowTrajectory& traj) {
  FlowState s;
  const auto R = radial::horizon(*traj.basis(), 1.0, 0.0, 0.0);
  if (R) s.sigma = horizon::Surface::sphere(*R);
  diagnostics(s, traj);
  return s;
}

elliptic::HarmonicField radial_velocity(const FlowState& s, const FlowTrajectory& traj) {
  const double R = s.horizon_radius();
  const auto bc = R > 0.0 ? elliptic::BoundarySpec::dirichlet(s.sigma, 0.0) : elliptic::BoundarySpec::none();
  auto v = elliptic::solve_exterior_harmonic(traj.basis(), bc, elliptic::AsymptoteSpec::constant(-std::exp(-s.t)));
  v.inside_value = 0.0;
  return v;
}

FlowState radial_advance(const FlowState& s, double dt, const FlowTrajectory& traj) {
  const auto& basis = *traj.basis();
  const double R0 = s.horizon_radius();
  const Coeffs v0 = velocity(s.t, R0, basis);

  auto find = [&](double A, double B) {
    const auto R = radial::horizon(basis, A, B, R0);
    return R ? *R : 0.0;
  };
  // Heun on B: predictor, horizon of the predicted factor, corrector. The
  // constant mode moves at exactly -e^-t and is integrated in closed form.
  const double A1 = s.A - std::exp(-s.t) * (1.0 - std::exp(-dt));
  const double Ap = A1, Bp = s.B + dt * v0.beta;
  const double Rp = find(Ap, Bp);
  const Coeffs v1 = velocity(s.t + dt, Rp, basis);

  FlowState n;
  n.t = s.t + dt;
  n.A = A1;
  n.B = s.B + 0.5 * dt * (v0.beta + v1.beta);
  const double R = find(n.A, n.B);
  if (R > 0.0) n.sigma = horizon::Surface::sphere(R);
  // Continuous motion of a radial horizon is at most a few R dt per step.
  n.jumped = (R0 == 0.0 && R > 0.0) || (R0 > 0.0 && R > R0 * (1.0 + 20.0 * dt));
  diagnostics(n, traj);
  return n;
}

}  // namespace detail

}  // namespace penrose::flow
