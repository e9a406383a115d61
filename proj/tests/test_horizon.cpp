#include <doctest.h>

#include <cmath>
#include <numbers>

#include "penrose/surface.hpp"

using namespace penrose;
using namespace penrose::horizon;

constexpr double kPi = std::numbers::pi;

TEST_CASE("minimal spheres of radial factors") {
  const auto s = minimal_sphere_radius(ConformalData::schwarzschild(1.4));
  REQUIRE(s.outermost);
  CHECK(*s.outermost == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_FALSE(minimal_sphere_radius(ConformalData::flat()).outermost);

  const double m = 1.0;
  for (double t : {0.0, 0.3, 1.1}) {
    auto W = [&](double r) {
      const Jet x = Jet::variable(r);
      return std::exp(-t) + (0.5 * m * std::exp(t)) * (Jet::constant(1.0) / x);
    };
    const auto roots = minimal_sphere_radius(W, 1e-3, 1e3);
    REQUIRE(roots.outermost);
    CHECK(*roots.outermost == doctest::Approx(0.5 * m * std::exp(2 * t)).epsilon(1e-11));
  }
}

TEST_CASE("smoothed poles have two minimal spheres only for small cores") {
  const auto thin = minimal_sphere_radius(ConformalData::smoothed_pole(1.0, 0.1));
  CHECK(thin.radii.size() == 2);
  CHECK(*thin.outermost == doctest::Approx(0.44).epsilon(0.01));
  CHECK(minimal_sphere_radius(ConformalData::smoothed_pole(1.0, 0.2)).radii.empty());
}

TEST_CASE("areas") {
  const double m = 1.0;
  const auto d = ConformalData::schwarzschild(m);
  CHECK(surface_area(Surface::sphere(m / 2), d) == doctest::Approx(16 * kPi * m * m).epsilon(1e-14));
  CHECK(surface_area(Surface::sphere(1.0), ConformalData::flat()) == doctest::Approx(4 * kPi));
  for (double t : {0.2, 0.9}) {
    const double R = 0.5 * m * std::exp(2 * t);
    auto u = [&](double rho, double z) {
      const double q = m / (2 * std::hypot(rho, z));
      return (std::exp(-t) + q * std::exp(t)) / (1 + q);
    };
    CHECK(surface_area(Surface::sphere(R), d, u) == doctest::Approx(16 * kPi * m * m).epsilon(1e-12));
  }
  Curve c{0.3, std::vector<double>(96, 2.0)};
  CHECK(surface_area(Surface::curves({c}), ConformalData::flat()) == doctest::Approx(16 * kPi).epsilon(1e-6));
}

TEST_CASE("enclosure") {
  CHECK(encloses(Surface::sphere(2.0), Surface::sphere(1.0)));
  CHECK_FALSE(encloses(Surface::sphere(1.0), Surface::sphere(1.0)));
  CHECK_FALSE(encloses(Surface::sphere(1.0), Surface::sphere(2.0)));
  const double m = 1.0;
  CHECK(encloses(Surface::sphere(0.5 * m * std::exp(0.2)), Surface::sphere(0.5 * m * std::exp(0.1))));

  Curve big{0.0, std::vector<double>(64, 3.0)};
  Curve a{1.0, std::vector<double>(64, 0.5)}, b{-1.0, std::vector<double>(64, 0.5)};
  CHECK(encloses(Surface::curves({big}), Surface::curves({a, b})));
  CHECK_FALSE(encloses(Surface::curves({a, b}), Surface::curves({big})));
  CHECK_FALSE(encloses(Surface::curves({a}), Surface::curves({a})));
  CHECK(encloses(Surface::curves({big}), Surface::sphere(2.0)));
}
