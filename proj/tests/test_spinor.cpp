#include <doctest.h>

#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <numbers>

#include "penrose/errors.hpp"
#include "penrose/spinor.hpp"

using namespace penrose;
using namespace penrose::spinor;

namespace {

constexpr std::complex<double> I(0.0, 1.0);

double matrix_error(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Manufactured data for the conformal-covariance check.
double smooth_factor(const Eigen::Vector3d& x) {
  return 1.3 + 0.2 * std::sin(x[0] + 0.5 * x[1]) * std::cos(0.7 * x[2]) + 0.1 * x[1] * x[2];
}

Spinor smooth_spinor(const Eigen::Vector3d& x) {
  return Spinor(std::cos(x[0]) + I * x[1] * x[2], std::exp(0.3 * x[2]) - I * std::sin(x[0] * x[1]));
}

const flow::FlowTrajectory& schwarzschild_run() {
  static const auto traj = flow::run_flow(ConformalData::schwarzschild(1.0), flow::FlowConfig{});
  return traj;
}

}  // namespace

TEST_CASE("clifford relations are exact") {
  const CliffordFrame f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Mat2 ac = f.e(i) * f.e(j) + f.e(j) * f.e(i);
      CHECK(matrix_error(ac, (i == j ? -2.0 : 0.0) * Mat2::Identity()) < 1e-12);
    }
  for (int i = 0; i < 3; ++i) CHECK(matrix_error(f.e(i).adjoint(), -f.e(i)) < 1e-12);
  const Eigen::Vector3d nu = Eigen::Vector3d(0.3, -0.4, 0.5).normalized();
  CHECK(matrix_error(f.i_nu(nu) * f.i_nu(nu), Mat2::Identity()) < 1e-12);
}

TEST_CASE("boundary splitting identities in the chosen representation") {
  const CliffordFrame f;
  const Mat2 ie1e2 = I * f.e(0) * f.e(1);
  CHECK((ie1e2 * f.one() - f.one()).norm() < 1e-12);
  CHECK((ie1e2 * f.eta() + f.eta()).norm() < 1e-12);
  CHECK((f.e(1) * f.e(2) * f.one() - I * f.eta()).norm() < 1e-12);
  CHECK((f.e(0) * f.e(2) * f.one() - f.eta()).norm() < 1e-12);

  const Eigen::Vector3d e3 = Eigen::Vector3d::UnitZ();
  const Mat2 inu = f.i_nu(e3);
  const Mat2 nu = f.vector(e3);
  for (int j : {0, 1}) {
    const Mat2 ejnu = f.e(j) * nu;
    CHECK(matrix_error(inu * ejnu + ejnu * inu, Mat2::Zero()) < 1e-12);
  }
  const Mat2 e1e2 = f.e(0) * f.e(1);
  CHECK(matrix_error(inu * e1e2 - e1e2 * inu, Mat2::Zero()) < 1e-12);
  CHECK(matrix_error(inu, ie1e2) < 1e-12);
}

TEST_CASE("reflection eigenspinors split the spinor space") {
  const CliffordFrame f;
  const auto b = reflection_eigenspinors(f);
  CHECK(matrix_error(b.projector_plus + b.projector_minus, Mat2::Identity()) < 1e-12);
  CHECK(matrix_error(b.projector_plus * b.projector_minus, Mat2::Zero()) < 1e-12);
  CHECK((b.projector_plus * b.plus - b.plus).norm() < 1e-12);
  CHECK((b.projector_minus * b.minus - b.minus).norm() < 1e-12);
  CHECK(std::abs(b.plus.dot(b.minus)) < 1e-12);
  Mat2 basis;
  basis << b.plus, b.minus;
  CHECK(std::abs(basis.determinant()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("clifford action of vectors") {
  const CliffordFrame f;
  const Spinor s(0.3 + 0.1 * I, -0.7);
  const Eigen::Vector3d v(1.0, -2.0, 0.5);
  CHECK((clifford_action(f, v, clifford_action(f, v, s)) + v.squaredNorm() * s).norm() < 1e-12);
}

TEST_CASE("flat dirac operator on simple fields") {
  const CliffordFrame f;
  const auto c = SpinorGrid::sample(6, 0.2, Eigen::Vector3d::Zero(), [](const Eigen::Vector3d&) {
    return Spinor(0.4, 0.2 * I);
  });
  CHECK(max_difference(dirac_flat(f, c), SpinorGrid(6, 0.2, Eigen::Vector3d::Zero()), 0) < 1e-13);
  CHECK(max_difference(dirac_apply(f, c, [](const Eigen::Vector3d&) { return 1.0; }),
                       SpinorGrid(6, 0.2, Eigen::Vector3d::Zero()), 0) < 1e-13);

  // psi = (x_1, 0): only the e_1 term survives.
  const auto lin = SpinorGrid::sample(5, 0.25, Eigen::Vector3d(-0.5, -0.5, -0.5),
                                      [](const Eigen::Vector3d& x) { return Spinor(x[0], 0.0); });
  const auto d = dirac_flat(f, lin);
  const Spinor expected = f.e(0) * Spinor(1.0, 0.0);
  for (const auto& v : d.values) CHECK((v - expected).norm() < 1e-12);
}

TEST_CASE("pullback of a constant spinor is dirac-null") {
  const CliffordFrame f;
  const Spinor psi0(1.0, 0.0);
  std::vector<double> res;
  for (int n : {9, 17, 33}) {
    const double h = 1.0 / (n - 1);
    const auto psi = SpinorGrid::sample(n, h, Eigen::Vector3d::Zero(), [&](const Eigen::Vector3d& x) {
      return Spinor(psi0 / std::pow(smooth_factor(x), 2));
    });
    const SpinorGrid zero(n, h, Eigen::Vector3d::Zero());
    CHECK(max_difference(dirac_apply(f, psi, smooth_factor), zero) < 1e-12);
    res.push_back(max_difference(dirac_covariant(f, psi, smooth_factor), zero));
  }
  CHECK(std::log2(res[0] / res[1]) >= 1.9);
  CHECK(std::log2(res[1] / res[2]) >= 1.9);
}

TEST_CASE("conformal covariance of the dirac operator converges at second order") {
  const CliffordFrame f;
  std::vector<double> res;
  for (int n : {9, 17, 33, 65}) {
    const double h = 1.0 / (n - 1);
    const auto psi = SpinorGrid::sample(n, h, Eigen::Vector3d::Zero(), smooth_spinor);
    res.push_back(max_difference(dirac_apply(f, psi, smooth_factor), dirac_covariant(f, psi, smooth_factor)));
  }
  for (std::size_t k = 0; k + 1 < res.size(); ++k) CHECK(std::log2(res[k] / res[k + 1]) >= 1.9);
  CHECK_THROWS_AS(dirac_apply(f, SpinorGrid::sample(4, 0.1, Eigen::Vector3d::Zero(), smooth_spinor),
                              [](const Eigen::Vector3d&) { return -1.0; }),
                  Error);
}

TEST_CASE("witten mass") {
  const Spinor psi0(1.0, 0.0);
  const auto flat = ConformalData::flat();
  CHECK(std::abs(witten_mass(flat, conformal_constant_spinor(flat, psi0))) < 1e-14);
  const auto d1 = ConformalData::smoothed_pole(1.0, 0.2);
  const auto d2 = ConformalData::smoothed_pole(2.0, 0.4);
  const double m1 = witten_mass(d1, conformal_constant_spinor(d1, psi0));
  const double m2 = witten_mass(d2, conformal_constant_spinor(d2, psi0));
  CHECK(m1 == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(m2 == doctest::Approx(2.0 * m1).epsilon(1e-2));
  // Another unit spinor gives the same mass.
  const Spinor tilted = Spinor(0.6, 0.8 * I);
  CHECK(witten_mass(d1, conformal_constant_spinor(d1, tilted)) == doctest::Approx(m1).epsilon(1e-10));
  CHECK_THROWS_AS(witten_mass(ConformalData::brill_lindquist(0.5, 0.5, 10.0), conformal_constant_spinor(d1, psi0)),
                  Error);
}

TEST_CASE("boundary spinors satisfy the eigen conditions and are dirac-null") {
  const auto& traj = schwarzschild_run();
  const auto s = solve_boundary_spinors(traj, 30);
  CHECK(s.boundary_residual < 1e-12);
  const CliffordFrame f;
  const Eigen::Vector3d x(0.4, -1.1, 0.9);
  const auto p = s.p(x);
  // Flat pullback: D_flat(U^2 p) = 0, with the derivative from the jet.
  const double r = x.norm();
  const Jet U = traj.data().radial(r);
  Spinor dirac = Spinor::Zero();
  for (int j = 0; j < 3; ++j) dirac += f.e(j) * (2.0 * U.v * U.d1 * x[j] / r * p.v + U.v * U.v * p.d[j]);
  CHECK(dirac.norm() < 1e-12);
  // Jets against central differences.
  const double h = 1e-5;
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector3d e = h * Eigen::Vector3d::Unit(j);
    const Spinor fd = (s.q(x + e).v - s.q(x - e).v) / (2.0 * h);
    CHECK((fd - s.q(x).d[j]).norm() < 1e-8);
  }
  // Unit asymptote at t = 0.
  CHECK(solve_boundary_spinors(traj, 0).p(Eigen::Vector3d(0, 0, 1e7)).v.norm() == doctest::Approx(1.0).epsilon(1e-6));
  SpinorConfig bad;
  bad.psi0 = Spinor(2.0, 0.0);
  CHECK_THROWS_AS(solve_boundary_spinors(traj, 0, bad), Error);
}

TEST_CASE("schwarzschild spinor correction terms") {
  const auto& traj = schwarzschild_run();
  const auto slices = solve_spinor_slices(traj);
  for (double r : {0.75, 1.0, 2.0, 5.0, 10.0})
    for (double mu : {-0.8, 0.0, 1.0}) {
      const auto [Q, P] = evaluate_QP_spinor(traj, slices, r, mu);
      CHECK(Q == doctest::Approx((1.0 - 0.5 / r) / (1.0 + 0.5 / r)).epsilon(1e-4));
      CHECK(P <= 1e-6);
    }
  CHECK(evaluate_QP_spinor(traj, slices, 0.4, 0.0).first == 0.0);
  const auto fields = accumulate_QP_spinor(traj, slices);
  CHECK(fields.P.maxCoeff() <= 1e-6);
  CHECK(fields.Q.minCoeff() >= 0.0);
  const auto rep = verify_equality_spinor(traj.data(), fields, traj);
  CHECK(std::abs(rep.gap) <= 1e-4);
  CHECK(rep.status == "verified");
}

TEST_CASE("spinor equality on smoothed poles") {
  for (double eps : {0.1, 0.2}) {
    const auto data = ConformalData::smoothed_pole(1.0, eps);
    const auto traj = flow::run_flow(data, flow::FlowConfig{});
    const auto fields = accumulate_QP_spinor(traj, solve_spinor_slices(traj));
    const auto rep = verify_equality_spinor(data, fields, traj);
    CHECK(std::abs(rep.gap) <= 0.03);
    CHECK(rep.tail_estimate < 1e-3);
    CHECK(fields.P.minCoeff() >= 0.0);
    CHECK(fields.Q.minCoeff() >= 0.0);
  }
}

TEST_CASE("flat data gives a degenerate report") {
  const auto flat = ConformalData::flat();
  const auto traj = flow::run_flow(flat, flow::FlowConfig{.dt = 0.1, .t_max = 1.0});
  const auto fields = accumulate_QP_spinor(traj, solve_spinor_slices(traj));
  const auto rep = verify_equality_spinor(flat, fields, traj);
  CHECK(rep.status == "degenerate");
  CHECK(std::abs(rep.gap) < 1e-12);
}
