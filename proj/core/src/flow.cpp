#include "penrose/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flow_internal.hpp"
#include "penrose/errors.hpp"

namespace penrose::flow {

double FlowState::horizon_radius() const {
  return sigma.kind == horizon::SurfaceKind::Sphere ? sigma.radius : 0.0;
}

double FlowState::horizon_extent() const {
  if (sigma.kind == horizon::SurfaceKind::Sphere) return sigma.radius;
  double r = 0.0;
  for (const horizon::Curve& c : sigma.components)
    for (int k = 0; k < c.size(); ++k) r = std::max(r, std::hypot(c.rho(k), c.z(k)));
  return r;
}

FlowTrajectory::FlowTrajectory(ConformalData data, FlowConfig config)
    : data_(std::move(data)), config_(config) {
  if (data_.is_radial()) basis_ = std::make_shared<elliptic::RadialBasis>(data_);
}

namespace detail {

namespace {
// Points this close to a surface (in log radius) count as on it.
constexpr double kOnSurface = 1e-10;
}  // namespace

double outside_measure(const horizon::Surface& s, double rho, double z) {
  switch (s.kind) {
    case horizon::SurfaceKind::Empty: return std::numeric_limits<double>::infinity();
    case horizon::SurfaceKind::Sphere: return std::log(std::hypot(rho, z) / s.radius);
    case horizon::SurfaceKind::Axisymmetric: {
      double best = std::numeric_limits<double>::infinity();
      for (const horizon::Curve& c : s.components) {
        const double dz = z - c.center;
        const double r = std::hypot(rho, dz);
        if (r == 0.0) return -std::numeric_limits<double>::infinity();
        best = std::min(best, std::log(r / c.radius_at(std::atan2(rho, dz))));
      }
      return best;
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

double FlowTrajectory::exit_time(double rho, double z) const {
  if (states.empty()) return 0.0;
  double prev = detail::outside_measure(states[0].sigma, rho, z);
  if (prev <= detail::kOnSurface) return 0.0;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const double g = detail::outside_measure(states[k].sigma, rho, z);
    if (g <= detail::kOnSurface) {
      if (!std::isfinite(prev)) return states[k].t;
      // log of the horizon size is close to linear in t between steps
      const double f = prev / (prev - g);
      return states[k - 1].t + f * (states[k].t - states[k - 1].t);
    }
    prev = g;
  }
  return config_.t_max;
}

bool FlowTrajectory::swallowed(double rho, double z) const {
  for (const FlowState& s : states)
    if (detail::outside_measure(s.sigma, rho, z) < 0.0) return true;
  return false;
}

Jet FlowTrajectory::u_exterior(std::size_t k, double r) const {
  if (!basis_) fail(ErrorKind::DomainError, "u_exterior needs radial data");
  const FlowState& s = states.at(k);
  if (s.B == 0.0) return Jet::constant(s.A);
  return s.A + s.B * basis_->K(r);
}

double FlowTrajectory::u(std::size_t k, double rho, double z) const {
  const FlowState& s = states.at(k);
  auto exterior = [&](std::size_t j) {
    if (radial()) return u_exterior(j, std::hypot(rho, z)).v;
    return detail::axisym_factor(states[j], rho, z) / data_.factor(rho, z);
  };
  if (detail::outside_measure(s.sigma, rho, z) >= 0.0) return exterior(k);
  if (detail::outside_measure(states[0].sigma, rho, z) < 0.0) return 1.0;
  const double te = exit_time(rho, z);
  std::size_t j = 1;
  while (j < k && states[j].t < te) ++j;
  const double t0 = states[j - 1].t, t1 = states[j].t;
  const double f = t1 > t0 ? (te - t0) / (t1 - t0) : 1.0;
  return (1.0 - f) * exterior(j - 1) + f * exterior(j);
}

elliptic::HarmonicField flow_velocity(const FlowState& state, const FlowTrajectory& traj) {
  return traj.radial() ? detail::radial_velocity(state, traj) : detail::axisym_velocity(state, traj);
}

FlowState flow_advance(const FlowState& state, double dt, const FlowTrajectory& traj) {
  if (!(dt >= 0.0)) fail(ErrorKind::DomainError, "time step must be non-negative");
  if (dt == 0.0) return state;
  FlowState next = traj.radial() ? detail::radial_advance(state, dt, traj) : detail::axisym_advance(state, dt, traj);
  if (!horizon::encloses(next.sigma, state.sigma) && !state.sigma.is_empty()) {
    // Allow a surface that has not moved (within tolerance) to count as enclosing.
    const double g = state.sigma.kind == horizon::SurfaceKind::Sphere && next.sigma.kind == horizon::SurfaceKind::Sphere
                         ? (state.sigma.radius - next.sigma.radius) / state.sigma.radius
                         : 0.0;
    if (g > traj.config().enclosure_tolerance)
      fail(ErrorKind::FlowInvariantViolated, "Sigma(t) moved inward at t = " + std::to_string(next.t));
  }
  return next;
}

FlowTrajectory run_flow(const ConformalData& data, const FlowConfig& config) {
  if (!(config.dt > 0.0) || !(config.t_max >= 0.0)) fail(ErrorKind::ValidationError, "need dt > 0 and t_max >= 0");
  FlowTrajectory traj(data, config);
  traj.states.push_back(traj.radial() ? detail::radial_initial_state(traj) : detail::axisym_initial_state(traj));
  if (traj.states.back().schwarzschild_deviation < config.convergence_threshold) traj.converged_at = 0.0;
  while (traj.states.back().t < config.t_max - 1e-12) {
    if (config.stop_on_convergence && traj.converged_at) break;
    const FlowState& cur = traj.states.back();
    const double dt = std::min(config.dt, config.t_max - cur.t);
    FlowState next = flow_advance(cur, dt, traj);
    if (next.jumped)
      traj.events.push_back({next.t, cur.horizon_extent(), next.horizon_extent(), "horizon jump"});
    if (!traj.converged_at && next.schwarzschild_deviation < config.convergence_threshold) traj.converged_at = next.t;
    traj.states.push_back(std::move(next));
  }
  return traj;
}

double exit_time(const FlowTrajectory& traj, double rho, double z) { return traj.exit_time(rho, z); }

OracleValue schwarzschild_flow_oracle(double m, double t, double r) {
  if (!(m > 0.0) || !(r > 0.0)) fail(ErrorKind::DomainError, "oracle needs m > 0 and r > 0");
  OracleValue o;
  o.horizon = 0.5 * m * std::exp(2.0 * t);
  o.exit_time = std::max(0.0, 0.5 * std::log(2.0 * r / m));
  const double q = m / (2.0 * r);
  const double te = std::min(t, o.exit_time);
  o.u = (std::exp(-te) + q * std::exp(te)) / (1.0 + q);
  return o;
}

}  // namespace penrose::flow
