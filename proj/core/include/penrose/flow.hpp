#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "penrose/conformal_data.hpp"
#include "penrose/elliptic.hpp"
#include "penrose/radial_basis.hpp"
#include "penrose/surface.hpp"

namespace penrose::flow {

struct FlowConfig {
  double dt = 0.01;
  double t_max = 6.0;
  // Stop once u_t U is within this relative distance of a Schwarzschild factor.
  double convergence_threshold = 1e-6;
  bool stop_on_convergence = false;
  // Allowed inward motion of the horizon before enclosure counts as violated.
  double enclosure_tolerance = 1e-9;
  // Axisymmetric runs only.
  int angular_cells = 64;
  int sources_per_component = 48;
  // Run the ring-source path on radial data too (cross-checks).
  bool force_axisymmetric = false;
};

class AxisymField;

// Snapshot of the flow at time t. On radial data u_t = A + B K(r) outside
// Sigma(t); axisymmetric runs keep W_t = u_t U in `field`.
struct FlowState {
  double t = 0.0;
  double A = 1.0;
  double B = 0.0;
  std::shared_ptr<const AxisymField> field;
  horizon::Surface sigma;
  double mass = 0.0;
  double area = 0.0;
  double mass_tilde = 0.0;  // ADM mass of phi_t^4 g, i.e. -m'(t)/2
  double schwarzschild_deviation = 0.0;
  double solver_residual = 0.0;  // largest boundary misfit of the field fits so far
  int components = 0;
  bool jumped = false;

  bool connected() const noexcept { return components == 1; }
  double horizon_radius() const;  // sphere radius, or 0 for empty / non-spherical
  double horizon_extent() const;  // largest coordinate distance of Sigma(t) from the origin
};

// from / to are horizon extents before and after the event.
struct FlowEvent {
  double t = 0.0;
  double from = 0.0;
  double to = 0.0;
  std::string what;
};

class FlowTrajectory {
 public:
  FlowTrajectory(ConformalData data, FlowConfig config);

  const ConformalData& data() const noexcept { return data_; }
  const FlowConfig& config() const noexcept { return config_; }
  std::shared_ptr<const elliptic::RadialBasis> basis() const noexcept { return basis_; }

  std::vector<FlowState> states;
  std::vector<FlowEvent> events;
  std::optional<double> converged_at;

  bool radial() const noexcept { return data_.is_radial() && !config_.force_axisymmetric; }
  double final_time() const { return states.empty() ? 0.0 : states.back().t; }

  // u at state k. Inside Sigma(t_k) the value frozen at the exit time.
  double u(std::size_t k, double rho, double z) const;
  // Radial: exterior formula A_k + B_k K(r) with derivatives.
  Jet u_exterior(std::size_t k, double r) const;
  // t(x) = first time the point lies inside Sigma(t); t_max when never.
  double exit_time(double rho, double z) const;
  bool swallowed(double rho, double z) const;

 private:
  friend FlowTrajectory run_flow(const ConformalData&, const FlowConfig&);
  ConformalData data_;
  FlowConfig config_;
  std::shared_ptr<const elliptic::RadialBasis> basis_;
};

// v_t: harmonic outside Sigma(t), 0 on and inside it, -e^-t at the end.
elliptic::HarmonicField flow_velocity(const FlowState& state, const FlowTrajectory& traj);
// One Heun step of u_t and the new outermost minimal surface.
FlowState flow_advance(const FlowState& state, double dt, const FlowTrajectory& traj);
FlowTrajectory run_flow(const ConformalData& data, const FlowConfig& config);
double exit_time(const FlowTrajectory& traj, double rho, double z);

struct OracleValue {
  double u = 1.0;
  double horizon = 0.0;
  double exit_time = 0.0;
};
// Closed-form flowed Schwarzschild data; inside the horizon u keeps the
// value it had when the point was swallowed.
OracleValue schwarzschild_flow_oracle(double m, double t, double r);

// Radial helpers shared with the correction pipelines.
namespace radial {
// Outermost root of W + 2 r W' with W = U (A + B K) at or beyond r_floor.
std::optional<double> horizon(const elliptic::RadialBasis& basis, double A, double B, double r_floor);
double mass(const ConformalData& data, double A, double B);
}  // namespace radial

}  // namespace penrose::flow
