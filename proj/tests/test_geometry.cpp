#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "penrose/errors.hpp"
#include "penrose/geometry.hpp"

using namespace penrose;
using namespace penrose::geometry;

namespace {

// Sample U far away in several directions and fit a + b/r ourselves.
double far_field_mass(const ConformalData& d, double r_fit) {
  std::vector<double> r, u;
  for (int k = 0; k <= 40; ++k) {
    const double rr = r_fit * (1.0 + k / 40.0);
    for (double th : {0.1, 1.0, 2.0, 3.0}) {
      r.push_back(rr);
      u.push_back(d.factor(rr * std::sin(th), rr * std::cos(th)));
    }
  }
  return adm_mass_from_samples(r, u, 1e-3).mass;
}

double max_interior(const ScalarField& f, double r_lo, double r_hi) {
  double m = 0.0;
  for (int j = 0; j < f.chart.n2(); ++j)
    for (int i = 0; i < f.chart.n1(); ++i) {
      const double r = node_point(f.chart, i, j).norm();
      if (r >= r_lo && r <= r_hi) m = std::max(m, std::abs(f(i, j)));
    }
  return m;
}

}  // namespace

TEST_CASE("adm mass of the builtin families") {
  CHECK(adm_mass(ConformalData::schwarzschild(1.3)).mass == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(adm_mass(ConformalData::flat()).mass == 0.0);
  const auto bl = ConformalData::brill_lindquist(0.5, 0.7, 4.0);
  CHECK(adm_mass(bl).mass == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(far_field_mass(bl, 2000.0) == doctest::Approx(1.2).epsilon(1e-6));
}

TEST_CASE("adm mass from a tabulated profile is fitted") {
  std::vector<double> r, u;
  for (int i = 0; i < 400; ++i) {
    const double rr = 0.05 * std::pow(1.03, i);
    r.push_back(rr);
    u.push_back(1.0 + 0.5 / std::sqrt(rr * rr + 0.04));
  }
  const auto d = ConformalData::from_radial_table(r, u);
  const MassEstimate est = adm_mass(d);
  CHECK(est.fitted);
  CHECK(est.mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("non-flat tail is rejected") {
  std::vector<double> r, u;
  for (int i = 0; i < 200; ++i) {
    const double rr = 0.1 * std::pow(1.05, i);
    r.push_back(rr);
    u.push_back(1.0 + 0.1 * std::log(rr));
  }
  const auto d = ConformalData::from_radial_table(r, u);
  try {
    (void)adm_mass(d);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonAsymptoticallyFlat);
  }
}

TEST_CASE("scalar curvature of harmonic and smoothed factors") {
  const Chart c = Chart::radial(0.05, 50.0, 400);
  const ScalarField Rs = scalar_curvature(ConformalData::schwarzschild(1.0), c);
  CHECK(max_interior(Rs, 0.06, 40.0) < 1e-4);

  const double m = 1.0, eps = 0.2;
  const ScalarField Rp = scalar_curvature(ConformalData::smoothed_pole(m, eps), c);
  double worst = 0.0;
  for (int i = 1; i < c.n1() - 1; ++i) {
    const double r = c.r(i), s = std::sqrt(r * r + eps * eps);
    const double U = 1.0 + m / (2.0 * s);
    const double exact = 12.0 * m * eps * eps / (std::pow(U, 5) * std::pow(s, 5));
    worst = std::max(worst, std::abs(Rp(i) - exact));
  }
  CHECK(worst < 1e-3);
  CHECK(Rp.values.minCoeff() > -1e-6);

  const Chart a = Chart::axisymmetric(2.0, -2.0, 2.0, 16, 32);
  ScalarField one(a);
  one.values.setConstant(3.0);
  const ScalarField lap = weighted_divergence(one, one);
  CHECK(lap.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conformal hessian reduces to the plain hessian for phi = 1") {
  const Chart a = Chart::axisymmetric(2.0, -2.0, 2.0, 32, 64);
  const auto flat = ConformalData::flat();
  ScalarField phi(a);
  phi.values.setOnes();
  const ScalarField f = ScalarField::sample(a, [](const Eigen::Vector3d& x) { return x.x() * x.x() + x.z() * x.x() * x.x(); });
  const SymTensorField T = conformal_hessian(f, phi, flat);
  const SymTensorField H = hessian(f);
  for (int k = 0; k < 6; ++k) CHECK((T.comp[k] - H.comp[k]).cwiseAbs().maxCoeff() == 0.0);

  const ScalarField z = ScalarField::sample(a, [](const Eigen::Vector3d& x) { return x.z(); });
  const SymTensorField Z = conformal_hessian(z, phi, flat);
  for (int k = 0; k < 6; ++k) CHECK(Z.comp[k].cwiseAbs().maxCoeff() < 1e-12);
}

namespace {

// Hessian of f = z in the metric r^-4 delta at x, from Christoffel symbols
// of finite-differenced metric components.
Eigen::Matrix3d oracle_hessian_of_z(const Eigen::Vector3d& x) {
  auto g = [](const Eigen::Vector3d& p) { return std::pow(p.squaredNorm(), -2.0); };
  const double h = 1e-5;
  Eigen::Vector3d dg;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[k] = h;
    dg[k] = (g(x + e) - g(x - e)) / (2.0 * h);
  }
  const double gx = g(x);
  Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // Gamma^z_ij for g = G delta: (dG_i delta_jz + dG_j delta_iz - dG_z delta_ij) / (2G)
      const double gamma = ((j == 2 ? dg[i] : 0.0) + (i == 2 ? dg[j] : 0.0) - (i == j ? dg[2] : 0.0)) / (2.0 * gx);
      out(i, j) = -gamma;
    }
  return out;
}

double hessian_error(int n) {
  const Chart a = Chart::axisymmetric(3.0, -3.0, 3.0, n, 2 * n);
  const ScalarField phi = ScalarField::sample(a, [](const Eigen::Vector3d& x) { return 1.0 / x.norm(); });
  const ScalarField z = ScalarField::sample(a, [](const Eigen::Vector3d& x) { return x.z(); });
  const SymTensorField T = conformal_hessian(z, phi, ConformalData::flat());
  double worst = 0.0;
  for (int j = 0; j < a.n2(); ++j)
    for (int i = 0; i < a.n1(); ++i) {
      const Eigen::Vector3d x = node_point(a, i, j);
      if (x.norm() < 1.0 || x.norm() > 2.0) continue;
      worst = std::max(worst, (T.at(i, j) - oracle_hessian_of_z(x)).cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

TEST_CASE("conformal hessian matches the hessian of the rescaled metric") {
  const double e1 = hessian_error(48), e2 = hessian_error(96);
  CHECK(e1 < 5e-2);
  CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("conformal hessian rejects a non-positive factor") {
  const Chart a = Chart::axisymmetric(1.0, -1.0, 1.0, 8, 8);
  ScalarField phi(a);
  const ScalarField f(a);
  CHECK_THROWS_AS(conformal_hessian(f, phi, ConformalData::flat()), Error);
}

namespace {

double bump(const Eigen::Vector3d& x) {
  const double s2 = (x - Eigen::Vector3d(0.0, 0.0, 2.0)).squaredNorm() / 0.81;
  return s2 < 1.0 ? std::pow(1.0 - s2, 6) : 0.0;
}

double transfer_residual(int n) {
  const Chart a = Chart::axisymmetric(2.0, 0.5, 3.5, n, static_cast<int>(1.5 * n) + 1);
  const ScalarField u = ScalarField::sample(a, [](const Eigen::Vector3d& x) { return 1.0 + 0.5 / x.norm(); });
  const ScalarField phi = ScalarField::sample(a, bump);
  const TransferResidual t = laplacian_transfer(u, phi, ConformalData::schwarzschild(0.4));
  ScalarField diff = t.lhs;
  diff.values -= t.rhs.values;
  double worst = 0.0;
  for (int j = 0; j < a.n2(); ++j)
    for (int i = 0; i < a.n1(); ++i) {
      const Eigen::Vector3d x = node_point(a, i, j);
      if (x.x() < 1.5 && x.z() > 1.0 && x.z() < 3.0) worst = std::max(worst, std::abs(diff(i, j)));
    }
  return worst;
}

}  // namespace

TEST_CASE("laplacian transfer identity") {
  const Chart a = Chart::axisymmetric(2.0, 0.5, 3.5, 32, 49);
  const ScalarField u = ScalarField::sample(a, [](const Eigen::Vector3d& x) { return 1.0 + 0.5 / x.norm(); });
  ScalarField phi = ScalarField::sample(a, [](const Eigen::Vector3d& x) { return x.z() / (1.0 + 0.5 / x.norm()); });
  const TransferResidual harm = laplacian_transfer(u, phi, ConformalData::flat());
  CHECK(max_interior(harm.lhs, 0.0, 1e9) < 1e-12);

  phi.values.setOnes();
  const TransferResidual id = laplacian_transfer(u, phi, ConformalData::flat());
  CHECK((id.lhs.values - id.rhs.values).cwiseAbs().maxCoeff() < 1e-12);

  const double r1 = transfer_residual(32), r2 = transfer_residual(64), r3 = transfer_residual(128);
  CHECK(std::log2(r1 / r2) >= 1.9);
  CHECK(std::log2(r2 / r3) >= 1.9);
}

TEST_CASE("rescaling under a conformal change") {
  const Chart a = Chart::axisymmetric(1.0, -1.0, 1.0, 8, 8);
  ScalarField f(a), phi(a);
  f.values.setConstant(1.5);
  phi.values.setOnes();
  for (auto k : {RescaleKind::GradientNorm, RescaleKind::VolumeElement, RescaleKind::ScalarCurvature})
    CHECK((rescale_under_conformal(f, phi, k).values - f.values).cwiseAbs().maxCoeff() == 0.0);
  const double t = 0.7;
  phi.values.setConstant(std::exp(-t));
  CHECK(rescale_under_conformal(f, phi, RescaleKind::GradientNorm)(3, 3) == doctest::Approx(1.5 * std::exp(2 * t)));
  phi.values.setConstant(2.0);
  f.values.setOnes();
  CHECK(rescale_under_conformal(f, phi, RescaleKind::VolumeElement)(0, 0) == doctest::Approx(64.0));
}
