#pragma once

#include "penrose/flow.hpp"
#include "penrose/ring_potential.hpp"

namespace penrose::flow {

// W_t = c U + H outside Sigma(t) with c = e^-t and H flat-harmonic and
// decaying; V_t = -c U + G is u-velocity times U, with G = c U on Sigma(t).
class AxisymField {
 public:
  std::shared_ptr<const ConformalData> data;
  double c = 1.0;
  elliptic::RingExpansion H, G;
  double fit_residual = 0.0;

  double value(double rho, double z) const { return c * data->factor(rho, z) + H.value(rho, z); }
  Eigen::Vector2d gradient(double rho, double z) const { return c * data->gradient(rho, z) + H.gradient(rho, z); }
  double velocity(double rho, double z) const { return -c * data->factor(rho, z) + G.value(rho, z); }
  Eigen::Vector2d velocity_gradient(double rho, double z) const {
    return -c * data->gradient(rho, z) + G.gradient(rho, z);
  }
};

}  // namespace penrose::flow

namespace penrose::flow::detail {

FlowState radial_initial_state(const FlowTrajectory& traj);
FlowState radial_advance(const FlowState& s, double dt, const FlowTrajectory& traj);
elliptic::HarmonicField radial_velocity(const FlowState& s, const FlowTrajectory& traj);

FlowState axisym_initial_state(const FlowTrajectory& traj);
FlowState axisym_advance(const FlowState& s, double dt, const FlowTrajectory& traj);
elliptic::HarmonicField axisym_velocity(const FlowState& s, const FlowTrajectory& traj);
double axisym_factor(const FlowState& s, double rho, double z);  // W_t = u_t U

// log(r / h(theta)) for the closest surface component; +inf when empty.
double outside_measure(const horizon::Surface& s, double rho, double z);

}  // namespace penrose::flow::detail
