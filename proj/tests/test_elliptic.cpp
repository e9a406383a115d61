#include <doctest.h>

#include <cmath>
#include <numbers>

#include "penrose/elliptic.hpp"
#include "penrose/errors.hpp"
#include "penrose/polar_solver.hpp"

using namespace penrose;
using namespace penrose::elliptic;
using horizon::Surface;

namespace {

std::shared_ptr<const RadialBasis> basis(const ConformalData& d) { return std::make_shared<RadialBasis>(d); }

// K(r) by composite Simpson in log r from r to 1e7 plus the a + b/r tail.
double quadrature_K(const ConformalData& d, double r) {
  const double top = 1e7;
  const int n = 200000;
  const double h = std::log(top / r) / n;
  auto f = [&](double y) {
    const double s = std::exp(y);
    const double u = d.factor(s);
    return 1.0 / (s * u * u);
  };
  double sum = f(std::log(r)) + f(std::log(top));
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(std::log(r) + k * h);
  const double a = d.asymptotics().a, b = d.asymptotics().b;
  return sum * h / 3.0 + 1.0 / (a * (a * top + b));
}

}  // namespace

TEST_CASE("tabulated radial basis solves its ODEs") {
  const auto d = ConformalData::smoothed_pole(1.0, 0.2);
  const RadialBasis B(d);
  CHECK_FALSE(B.closed_form());
  for (double r : {0.05, 0.3, 1.0, 7.0, 40.0}) {
    CHECK(B.K(r).v == doctest::Approx(quadrature_K(d, r)).epsilon(1e-8));
    const Jet U = d.radial(r);
    for (const Jet& h : {B.growing(r), B.decaying(r)}) {
      const double res = h.d2 + (2.0 / r + 2.0 * U.d1 / U.v) * h.d1 - 2.0 * h.v / (r * r);
      CHECK(std::abs(res) < 1e-6 * (std::abs(h.v) / (r * r) + 1e-12));
    }
  }
  // normalisation of the growing mode
  const double r = 5e4;
  CHECK(B.growing(r).v * d.factor(r) / r == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("closed-form radial basis for a pure pole") {
  const RadialBasis B(ConformalData::schwarzschild(2.0));
  CHECK(B.closed_form());
  CHECK(B.K(3.0).v == doctest::Approx(1.0 / (3.0 + 1.0)));
  CHECK(B.K(3.0).d1 == doctest::Approx(-1.0 / 16.0));
}

TEST_CASE("schwarzschild flow velocity at t = 0") {
  const double m = 1.3;
  const auto f = solve_exterior_harmonic(basis(ConformalData::schwarzschild(m)),
                                         BoundarySpec::dirichlet(Surface::sphere(m / 2), 0.0),
                                         AsymptoteSpec::constant(-1.0));
  for (double r : {0.65, 0.9, 2.0, 10.0, 1e4}) {
    const double q = m / (2 * r);
    CHECK(f.value(0.0, r) == doctest::Approx((-1.0 + q) / (1.0 + q)).epsilon(1e-12));
  }
}

TEST_CASE("flat exterior problems") {
  const auto flat = basis(ConformalData::flat());
  const auto one = solve_exterior_harmonic(flat, BoundarySpec::dirichlet(Surface::sphere(1.0), 1.0),
                                           AsymptoteSpec::constant(1.0));
  CHECK(one.value(0.3, 2.0) == doctest::Approx(1.0));
  CHECK(one.gradient(0.3, 2.0).norm() < 1e-14);

  const auto lin = solve_exterior_harmonic(flat, BoundarySpec::dirichlet(Surface::sphere(1.0), 0.0),
                                           AsymptoteSpec::linear(1.0));
  const auto grid = solve_exterior_harmonic_grid(ConformalData::flat(),
                                                 BoundarySpec::dirichlet(Surface::sphere(1.0), 0.0),
                                                 AsymptoteSpec::linear(1.0), {256, 128});
  for (double r : {1.2, 2.0, 5.0})
    for (double th : {0.3, 1.0, 2.5}) {
      const double rho = r * std::sin(th), z = r * std::cos(th);
      const double exact = (r - 1.0 / (r * r)) * std::cos(th);
      CHECK(lin.value(rho, z) == doctest::Approx(exact).epsilon(1e-12));
      CHECK(std::abs(grid.value(rho, z) - exact) < 1e-4 * r);
    }
}

TEST_CASE("radial and grid paths agree on spherically symmetric inputs") {
  for (const auto& data : {ConformalData::schwarzschild(1.0), ConformalData::smoothed_pole(1.0, 0.2)}) {
    const auto B = basis(data);
    const Surface S = Surface::sphere(0.7);
    struct Case {
      BoundarySpec bc;
      AsymptoteSpec asym;
    };
    const Case cases[] = {
        {BoundarySpec::dirichlet(S, 0.5), AsymptoteSpec::constant(1.0)},
        {BoundarySpec::dirichlet(S, 0.0), AsymptoteSpec::linear(0.8)},
        {BoundarySpec::robin(S, -0.3), AsymptoteSpec::linear(0.8)},
    };
    for (const Case& c : cases) {
      const auto ex = solve_exterior_harmonic(B, c.bc, c.asym);
      const auto gr = solve_exterior_harmonic_grid(data, c.bc, c.asym, {256, 128});
      for (double r : {0.8, 1.5, 4.0, 20.0})
        for (double th : {0.4, 1.2}) {
          const double rho = r * std::sin(th), z = r * std::cos(th);
          const double scale = std::max(1.0, std::abs(ex.value(rho, z)));
          CHECK(std::abs(gr.value(rho, z) - ex.value(rho, z)) < 1e-4 * scale);
        }
    }
  }
}

TEST_CASE("maximum principle and boundary conditions") {
  const auto B = basis(ConformalData::smoothed_pole(1.0, 0.2));
  const auto f = solve_exterior_harmonic(B, BoundarySpec::dirichlet(Surface::sphere(0.5), 0.25),
                                         AsymptoteSpec::constant(1.0));
  for (double r = 0.5; r < 1e4; r *= 1.3) {
    const double v = f.value(0.0, r);
    CHECK(v >= 0.25 - 1e-12);
    CHECK(v <= 1.0 + 1e-12);
  }
  CHECK(f.stats.boundary_residual < 1e-12);

  const auto neumann = solve_exterior_harmonic(B, BoundarySpec::robin(Surface::sphere(0.5), 0.0),
                                               AsymptoteSpec::linear(1.0));
  CHECK(std::abs(neumann.radial->profile(0.5).d1) < 1e-10);
}

TEST_CASE("invalid problems are rejected") {
  const auto B = basis(ConformalData::flat());
  BoundarySpec bad;
  bad.kind = BoundaryKind::Dirichlet;
  CHECK_THROWS_AS(solve_exterior_harmonic(B, bad, AsymptoteSpec::constant(1.0)), Error);
  CHECK_THROWS_AS(solve_exterior_harmonic_grid(ConformalData::flat(), BoundarySpec::none(), AsymptoteSpec::constant(1.0)),
                  Error);
}

TEST_CASE("doubled harmonic function") {
  const double m = 1.0, t = 0.4;
  const double R = 0.5 * m * std::exp(2 * t);
  auto W = [&](double r) {
    const Jet x = Jet::variable(r);
    return std::exp(-t) + (0.5 * m * std::exp(t)) * (Jet::constant(1.0) / x);
  };
  const auto direct = solve_doubled_harmonic(W, R, 1.0, 0.0, DoubledMethod::Direct);
  const auto refl = solve_doubled_harmonic(W, R, 1.0, 0.0, DoubledMethod::Reflection);
  CHECK(direct.value(R, 1) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(refl.value(R, 1) == doctest::Approx(0.5).epsilon(1e-12));
  for (double r : {R, 1.5 * R, 4.0 * R, 50.0 * R}) {
    const double exact = 1.0 / (1.0 + m / (2 * r) * std::exp(2 * t));
    CHECK(direct.value(r, 1) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(refl.value(r, 1) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(direct.value(r, -1) == doctest::Approx(refl.value(r, -1)).epsilon(1e-6));
  }
  const auto flat = solve_doubled_harmonic(W, R, 0.7, 0.7);
  for (double r : {R, 3.0 * R}) {
    CHECK(flat.value(r, 1) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(flat.value(r, -1) == doctest::Approx(0.7).epsilon(1e-10));
  }
}
