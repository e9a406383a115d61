#include <doctest.h>

#include <cmath>
#include <numbers>

#include "penrose/errors.hpp"
#include "penrose/flow.hpp"

using namespace penrose;
using namespace penrose::flow;

constexpr double kPi = std::numbers::pi;

TEST_CASE("schwarzschild oracle") {
  const auto a = schwarzschild_flow_oracle(1.0, 0.0, 2.0);
  CHECK(a.u == doctest::Approx(1.0));
  CHECK(a.horizon == doctest::Approx(0.5));
  CHECK(a.exit_time == doctest::Approx(std::log(2.0)));
  const auto b = schwarzschild_flow_oracle(1.0, 0.5 * std::log(2.0), 2.0);
  CHECK(b.u == doctest::Approx((std::pow(2.0, -0.5) + 0.25 * std::sqrt(2.0)) / 1.25).epsilon(1e-14));
  CHECK(b.u == doctest::Approx(0.84853).epsilon(1e-5));
  CHECK(b.horizon == doctest::Approx(1.0));
  CHECK(schwarzschild_flow_oracle(1.0, 0.0, 0.5).exit_time == 0.0);
  CHECK_THROWS_AS(schwarzschild_flow_oracle(-1.0, 0.0, 1.0), Error);
}

TEST_CASE("flow velocity of schwarzschild") {
  const double m = 1.0;
  FlowConfig cfg;
  cfg.t_max = 0.0;
  const auto traj = run_flow(ConformalData::schwarzschild(m), cfg);
  REQUIRE(traj.states.size() == 1);
  const auto v = flow_velocity(traj.states[0], traj);
  for (double r : {0.5, 0.8, 3.0}) {
    const double q = m / (2 * r);
    CHECK(v.value(0.0, r) == doctest::Approx((-1.0 + q) / (1.0 + q)).epsilon(1e-12));
  }
  CHECK(std::abs(v.value(0.0, 0.5)) < 1e-11);
  CHECK(v.value(0.0, 0.2) == 0.0);
  CHECK(v.value(0.0, 1e9) == doctest::Approx(-1.0).epsilon(1e-8));
  const FlowState same = flow_advance(traj.states[0], 0.0, traj);
  CHECK(same.A == traj.states[0].A);
  CHECK(same.B == traj.states[0].B);
}

TEST_CASE("radial flow reproduces the flowed schwarzschild metric") {
  const double m = 1.0;
  FlowConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 1.7;
  const auto traj = run_flow(ConformalData::schwarzschild(m), cfg);
  CHECK(traj.converged_at.has_value());
  double worst_u = 0.0, worst_R = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); k += 50) {
    const FlowState& s = traj.states[k];
    worst_R = std::max(worst_R, std::abs(s.horizon_radius() - 0.5 * m * std::exp(2 * s.t)) / s.horizon_radius());
    for (double r : {0.3, 0.75, 1.0, 2.0, 5.0, 10.0, 100.0})
      worst_u = std::max(worst_u, std::abs(traj.u(k, 0.0, r) - schwarzschild_flow_oracle(m, s.t, r).u));
    CHECK(s.mass == doctest::Approx(m).epsilon(1e-6));
    CHECK(s.area == doctest::Approx(16 * kPi * m * m).epsilon(1e-5));
    CHECK(std::abs(s.mass_tilde) < 1e-5);
  }
  CHECK(worst_u < 1e-6);
  CHECK(worst_R < 1e-6);
  for (double r : {0.75, 1.0, 2.0, 5.0, 10.0})
    CHECK(std::abs(traj.exit_time(0.0, r) - 0.5 * std::log(2 * r / m)) < 1e-6);
  CHECK(traj.exit_time(0.0, 0.5) == 0.0);
  CHECK(traj.exit_time(0.0, 0.2) == 0.0);
  CHECK(traj.exit_time(0.0, 1e3) == cfg.t_max);
}

TEST_CASE("flow of a smoothed pole with a horizon") {
  FlowConfig cfg;
  cfg.t_max = 3.0;
  const auto traj = run_flow(ConformalData::smoothed_pole(1.0, 0.1), cfg);
  const double m0 = traj.states[0].mass, A0 = traj.states[0].area;
  REQUIRE(A0 > 0.0);
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    const auto& a = traj.states[k - 1];
    const auto& b = traj.states[k];
    CHECK(b.mass <= a.mass + 1e-3 * m0);
    CHECK(horizon::encloses(b.sigma, a.sigma));
    CHECK(std::abs(b.area - A0) / A0 < 1e-2);
    // m~ = -m'/2, compared with a centred difference
    if (k + 1 < traj.states.size()) {
      const double md = -0.5 * (traj.states[k + 1].mass - a.mass) / (traj.states[k + 1].t - a.t);
      CHECK(b.mass_tilde == doctest::Approx(md).epsilon(2e-3));
    }
  }
  double last = -1.0;
  for (double r = 0.45; r < 40.0; r *= 1.2) {
    const double te = traj.exit_time(0.0, r);
    CHECK(te >= last);
    last = te;
  }
}

TEST_CASE("flow without a horizon is a rescaling") {
  FlowConfig cfg;
  cfg.t_max = 1.0;
  const auto traj = run_flow(ConformalData::smoothed_pole(1.0, 0.2), cfg);
  for (const auto& s : traj.states) {
    CHECK(s.sigma.is_empty());
    CHECK(s.A == doctest::Approx(std::exp(-s.t)).epsilon(1e-4));
    CHECK(s.B == 0.0);
  }
  CHECK(traj.exit_time(0.0, 0.1) == cfg.t_max);
}
