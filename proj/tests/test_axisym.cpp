#include <doctest.h>

#include <cmath>
#include <numbers>

#include "penrose/errors.hpp"
#include "penrose/flow.hpp"
#include "penrose/ring_potential.hpp"
#include "penrose/surface.hpp"

using namespace penrose;

namespace {

constexpr double kPi = std::numbers::pi;

// Largest log-radius by which any sample of `inner` sits outside `outer`.
double protrusion(const horizon::Surface& outer, const horizon::Surface& inner) {
  double worst = -1e300;
  for (const auto& c : inner.components) {
    for (int k = 0; k < c.size(); ++k) {
      double best = 1e300;
      for (const auto& o : outer.components) {
        const double dz = c.z(k) - o.center;
        best = std::min(best, std::log(std::hypot(c.rho(k), dz) / o.radius_at(std::atan2(c.rho(k), dz))));
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("ring potential against limits and finite differences") {
  using elliptic::ring_potential;
  const double a = 0.7, z0 = 0.3;
  // On the axis every point of the ring is at distance sqrt(a^2 + zeta^2).
  for (double z : {-1.0, 0.3, 2.5})
    CHECK(ring_potential(a, z0, 0.0, z)[0] == doctest::Approx(1.0 / std::hypot(a, z - z0)).epsilon(1e-13));
  CHECK(ring_potential(a, z0, 3e3, 4e3)[0] == doctest::Approx(1.0 / std::hypot(3e3, 4e3 - z0)).epsilon(1e-7));
  CHECK(ring_potential(0.0, z0, 1.0, 1.3)[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  const double h = 1e-5;
  for (auto [rho, z] : {std::pair{0.2, 1.0}, {1.5, -0.4}, {0.69, 0.35}, {3.0, 0.3}, {1e-3, 0.5}}) {
    const auto v = ring_potential(a, z0, rho, z);
    const double fr = (ring_potential(a, z0, rho + h, z)[0] - ring_potential(a, z0, rho - h, z)[0]) / (2 * h);
    const double fz = (ring_potential(a, z0, rho, z + h)[0] - ring_potential(a, z0, rho, z - h)[0]) / (2 * h);
    CHECK(v[1] == doctest::Approx(fr).epsilon(1e-6).scale(1.0));
    CHECK(v[2] == doctest::Approx(fz).epsilon(1e-6).scale(1.0));
    // Axisymmetric flat Laplacian f_rr + f_r / rho + f_zz.
    if (std::hypot(rho - a, z - z0) > 0.3 && rho > 0.1) {
      const double e = 1e-3;
      const double lap = (ring_potential(a, z0, rho + e, z)[0] - 2 * v[0] + ring_potential(a, z0, rho - e, z)[0]) / (e * e) +
                         v[1] / rho +
                         (ring_potential(a, z0, rho, z + e)[0] - 2 * v[0] + ring_potential(a, z0, rho, z - e)[0]) / (e * e);
      CHECK(std::abs(lap) < 1e-4);
    }
  }
  // The elliptic integrals agree with the standard library.
  for (double rho : {0.05, 0.5, 0.69, 2.0}) {
    const double zeta = 0.4, al2 = (rho + a) * (rho + a) + zeta * zeta, be2 = (rho - a) * (rho - a) + zeta * zeta;
    const double k = std::sqrt(1.0 - be2 / al2);
    CHECK(ring_potential(a, z0, rho, z0 + zeta)[0] ==
          doctest::Approx(2.0 * std::comp_ellint_1(k) / (kPi * std::sqrt(al2))).epsilon(1e-12));
  }
}

TEST_CASE("ring charges reproduce an exterior harmonic function") {
  // Offset point charge inside the unit circle; fit on the circle only.
  const double zc = 0.2;
  std::vector<Eigen::Vector2d> pts;
  std::vector<double> vals;
  for (int k = 0; k < 128; ++k) {
    const double th = (k + 0.5) * kPi / 128;
    pts.emplace_back(std::sin(th), std::cos(th));
    vals.push_back(1.0 / std::hypot(std::sin(th), std::cos(th) - zc));
  }
  std::vector<elliptic::RingSource> src{{0.0, 0.0, 0.0}};
  for (double lam : {0.5, 0.8})
    for (int j = 0; j < 24; ++j) {
      const double th = (j + 0.5) * kPi / 24;
      src.push_back({lam * std::sin(th), lam * std::cos(th), 0.0});
    }
  const auto fit = elliptic::fit_ring_charges(src, pts, vals);
  CHECK(fit.residual < 1e-9);
  CHECK(fit.expansion.monopole() == doctest::Approx(1.0).epsilon(1e-8));
  for (auto [rho, z] : {std::pair{1.5, 0.0}, {0.3, 2.0}, {4.0, -3.0}})
    CHECK(fit.expansion.value(rho, z) == doctest::Approx(1.0 / std::hypot(rho, z - zc)).epsilon(1e-8));
  CHECK_THROWS_AS(elliptic::fit_ring_charges(src, {pts[0]}, {vals[0]}), Error);
}

TEST_CASE("axisymmetric finder on spherical data") {
  const auto s = horizon::outermost_surface_axisym(ConformalData::schwarzschild(1.0));
  REQUIRE(s.surface.component_count() == 1);
  CHECK_FALSE(s.split);
  for (double h : s.surface.components[0].h) CHECK(h == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(horizon::surface_area(s.surface, ConformalData::schwarzschild(1.0)) ==
        doctest::Approx(16 * kPi).epsilon(1e-6));

  // Smoothed pole: compare with the radial root finder.
  const auto sp = ConformalData::smoothed_pole(1.0, 0.1);
  const auto radial = horizon::minimal_sphere_radius(sp);
  REQUIRE(radial.outermost);
  const auto a = horizon::outermost_surface_axisym(sp);
  REQUIRE(a.surface.component_count() == 1);
  for (double h : a.surface.components[0].h) CHECK(h == doctest::Approx(*radial.outermost).epsilon(1e-7));

  CHECK(horizon::outermost_surface_axisym(ConformalData::flat()).surface.is_empty());
  CHECK(horizon::outermost_surface_axisym(ConformalData::smoothed_pole(1.0, 0.2)).surface.is_empty());

  // A lopsided warm start relaxes back to the sphere.
  horizon::Curve c;
  for (int k = 0; k < 64; ++k) c.h.push_back(0.6 + 0.05 * std::cos((k + 0.5) * kPi / 64));
  const auto r = horizon::refine_surface_axisym(horizon::Surface::curves({c}),
                                               horizon::factor_field(ConformalData::schwarzschild(1.0)));
  REQUIRE(r.surface.component_count() == 1);
  for (double h : r.surface.components[0].h) CHECK(h == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("Brill-Lindquist horizons are area stationary") {
  for (double d : {0.5, 10.0}) {
    const auto data = ConformalData::brill_lindquist(0.5, 0.5, d);
    const auto res = horizon::outermost_surface_axisym(data);
    CHECK(res.split == (d > 1.0));
    REQUIRE(res.surface.component_count() == (d > 1.0 ? 2 : 1));
    const double A = horizon::surface_area(res.surface, data);
    // First variation of the area under an angular bump vanishes.
    for (int mode : {0, 2}) {
      auto bumped = [&](double eps) {
        horizon::Surface s = res.surface;
        for (auto& c : s.components)
          for (int k = 0; k < c.size(); ++k) c.h[k] *= 1.0 + eps * std::cos(mode * c.theta(k));
        return horizon::surface_area(s, data);
      };
      const double e = 1e-4;
      CHECK(std::abs(bumped(e) - bumped(-e)) / (2 * e) < 1e-3 * A);
      CHECK(std::abs(bumped(0.05) - A) > 1e-5 * A);
    }
    for (const auto& c : res.surface.components) {
      const auto H = horizon::mean_curvature(c, horizon::factor_field(data));
      for (double v : H) CHECK(std::abs(v) < 1e-7);
    }
  }
}

TEST_CASE("ring-source flow reproduces the Schwarzschild oracle") {
  flow::FlowConfig cfg;
  cfg.t_max = 0.5;
  cfg.force_axisymmetric = true;
  const auto traj = flow::run_flow(ConformalData::schwarzschild(1.0), cfg);
  REQUIRE_FALSE(traj.radial());
  for (std::size_t k = 0; k < traj.states.size(); k += 10) {
    const auto& s = traj.states[k];
    const double R = 0.5 * std::exp(2 * s.t);
    REQUIRE(s.components == 1);
    // Heun error of the ring path at dt = 0.01 (the radial path integrates exactly).
    for (double h : s.sigma.components[0].h) CHECK(h == doctest::Approx(R).epsilon(1e-5));
    CHECK(s.mass == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(s.area == doctest::Approx(16 * kPi).epsilon(1e-5));
    for (double r : {3.0, 10.0})
      CHECK(traj.u(k, 0.6 * r, 0.8 * r) == doctest::Approx(flow::schwarzschild_flow_oracle(1.0, s.t, r).u).epsilon(1e-6));
  }
  // Same data through the closed-form radial path.
  flow::FlowConfig rc = cfg;
  rc.force_axisymmetric = false;
  const auto rad = flow::run_flow(ConformalData::schwarzschild(1.0), rc);
  REQUIRE(rad.states.size() == traj.states.size());
  CHECK(traj.states.back().mass == doctest::Approx(rad.states.back().mass).epsilon(1e-3));
  CHECK(traj.exit_time(0.0, 1.2) == doctest::Approx(rad.exit_time(0.0, 1.2)).epsilon(1e-3));

  const auto v = flow::flow_velocity(traj.states.back(), traj);
  const double R = traj.states.back().sigma.components[0].h[0];
  CHECK(std::abs(v.value(R, 0.0)) < 1e-6);
  CHECK(v.value(0.0, 1e6) == doctest::Approx(-std::exp(-0.5)).epsilon(1e-5));
  CHECK(v.value(0.0, 0.1) == 0.0);
}

TEST_CASE("Brill-Lindquist flow through the merger") {
  flow::FlowConfig cfg;
  cfg.t_max = 2.0;
  cfg.dt = 0.02;
  const auto data = ConformalData::brill_lindquist(0.5, 0.5, 10.0);
  const auto traj = flow::run_flow(data, cfg);
  const auto& s0 = traj.states.front();
  CHECK(s0.components == 2);
  CHECK(traj.states.back().components == 1);
  REQUIRE(traj.events.size() == 1);
  CHECK(traj.events[0].to > traj.events[0].from);
  double lsf = 0.0;
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    const auto& a = traj.states[k - 1];
    const auto& b = traj.states[k];
    CHECK(std::abs(b.area - s0.area) <= 0.01 * s0.area);
    CHECK(b.mass <= a.mass + 1e-3 * s0.mass);
    CHECK(protrusion(b.sigma, a.sigma) <= kPi / cfg.angular_cells);
    lsf += (b.t - a.t) * (a.mass_tilde + b.mass_tilde);
  }
  CHECK(std::abs(s0.mass - traj.states.back().mass - lsf) <= 0.02 * s0.mass);
  CHECK(traj.states.back().mass >= std::sqrt(traj.states.back().area / (16 * kPi)) - 1e-3);
}
