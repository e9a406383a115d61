#include "penrose/ring_potential.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "penrose/errors.hpp"

namespace penrose::elliptic {

namespace {

// Complete elliptic integrals K(k), E(k) together by the arithmetic-geometric
// mean; about four times cheaper than two separate library calls.
std::pair<double, double> complete_elliptic(double k) {
  double a = 1.0, g = std::sqrt(std::max(0.0, 1.0 - k * k)), c = k;
  double sum = 0.5 * c * c, pow2 = 0.5;
  for (int it = 0; it < 40 && std::abs(c) > 1e-16 * a; ++it) {
    const double an = 0.5 * (a + g);
    c = 0.5 * (a - g);
    g = std::sqrt(a * g);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return {K, K * (1.0 - sum)};
}

}  // namespace

Eigen::Vector3d ring_potential(double a, double z0, double rho, double z) {
  const double zeta = z - z0;
  if (a == 0.0) {
    const double d2 = rho * rho + zeta * zeta;
    const double d = std::sqrt(d2);
    return {1.0 / d, -rho / (d2 * d), -zeta / (d2 * d)};
  }
  const double alpha2 = (rho + a) * (rho + a) + zeta * zeta;
  const double beta2 = (rho - a) * (rho - a) + zeta * zeta;
  const double alpha = std::sqrt(alpha2);
  const double k = std::sqrt(std::max(0.0, 1.0 - beta2 / alpha2));
  const auto [K, E] = complete_elliptic(k);
  const double pi = std::numbers::pi;
  const double value = 2.0 * K / (pi * alpha);
  const double dz = -2.0 * zeta * E / (pi * alpha * beta2);
  double drho = 0.0;
  if (rho > 1e-7 * a) {
    drho = (E * (a * a - rho * rho + zeta * zeta) / beta2 - K) / (pi * rho * alpha);
  } else {
    // Leading term of the expansion in rho near the axis.
    const double d2 = a * a + zeta * zeta;
    drho = rho * (2.0 * zeta * zeta - a * a) / (2.0 * std::pow(d2, 2.5));
  }
  return {value, drho, dz};
}

double RingExpansion::value(double rho, double z) const {
  double s = 0.0;
  for (const auto& src : sources) s += src.charge * ring_potential(src.a, src.z, rho, z)[0];
  return s;
}

Eigen::Vector2d RingExpansion::gradient(double rho, double z) const {
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (const auto& src : sources) g += src.charge * ring_potential(src.a, src.z, rho, z).tail<2>();
  return g;
}

double RingExpansion::monopole() const {
  double s = 0.0;
  for (const auto& src : sources) s += src.charge;
  return s;
}

void RingExpansion::add(const RingExpansion& other, double weight) {
  for (RingSource s : other.sources) {
    s.charge *= weight;
    sources.push_back(s);
  }
}

FitResult fit_ring_charges(const std::vector<RingSource>& positions, const std::vector<Eigen::Vector2d>& points,
                           const std::vector<double>& values) {
  if (points.size() != values.size() || positions.empty() || points.size() < positions.size())
    fail(ErrorKind::DomainError, "ring fit needs at least as many collocation points as sources");
  const Eigen::Index m = static_cast<Eigen::Index>(points.size()), n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd M(m, n);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b[i] = values[i];
    for (Eigen::Index j = 0; j < n; ++j)
      M(i, j) = ring_potential(positions[j].a, positions[j].z, points[i].x(), points[i].y())[0];
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-13);
  const Eigen::VectorXd q = svd.solve(b);
  FitResult out;
  out.expansion.sources = positions;
  for (Eigen::Index j = 0; j < n; ++j) out.expansion.sources[j].charge = q[j];
  out.residual = (M * q - b).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace penrose::elliptic
