#include "penrose/conformal_data.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "penrose/errors.hpp"

namespace penrose {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::ValidationError, std::string(what) + " must be positive");
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 4 || y_.size() != n) fail(ErrorKind::ValidationError, "spline needs at least 4 matching samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) fail(ErrorKind::ValidationError, "spline abscissae must increase strictly");

  // Natural end conditions; Thomas algorithm on the interior system.
  m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    const double a = h0, b = 2.0 * (h0 + h1), cc = h1;
    const double r = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (r - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
    if (i == 1) break;
  }
}

Jet CubicSpline::operator()(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - x_.begin(), 1, static_cast<std::ptrdiff_t>(x_.size()) - 1));
  const std::size_t i = k - 1;
  const double h = x_[k] - x_[i];
  const double A = (x_[k] - x) / h, B = (x - x_[i]) / h;
  const double v = A * y_[i] + B * y_[k] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[k]) * h * h / 6.0;
  const double d1 = (y_[k] - y_[i]) / h - (3.0 * A * A - 1.0) * h * m_[i] / 6.0 + (3.0 * B * B - 1.0) * h * m_[k] / 6.0;
  const double d2 = A * m_[i] + B * m_[k];
  return {v, d1, d2};
}

Asymptotics fit_asymptotics(std::span<const double> r, std::span<const double> u) {
  if (r.size() != u.size() || r.size() < 2) fail(ErrorKind::NonAsymptoticallyFlat, "too few far-field samples to fit a + b/r");
  Eigen::MatrixXd A(r.size(), 2);
  Eigen::VectorXd y(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = 1.0 / r[i];
    y(i) = u[i];
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
  Asymptotics out;
  out.a = c(0);
  out.b = c(1);
  out.fitted = true;
  out.residual = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(r.size()));
  return out;
}

ConformalData ConformalData::flat() {
  ConformalData d;
  d.name_ = "flat";
  return d;
}

ConformalData ConformalData::schwarzschild(double m) {
  require_positive(m, "mass");
  ConformalData d;
  d.name_ = "schwarzschild";
  d.poles_ = {{0.0, m, 0.0}};
  d.asym_.b = 0.5 * m;
  return d;
}

ConformalData ConformalData::smoothed_pole(double m, double eps) {
  require_positive(m, "mass");
  require_positive(eps, "smoothing length");
  ConformalData d;
  d.name_ = "smoothed_pole";
  d.poles_ = {{0.0, m, eps}};
  d.asym_.b = 0.5 * m;
  d.harmonic_ = false;
  return d;
}

ConformalData ConformalData::brill_lindquist(double m1, double m2, double separation) {
  require_positive(m1, "mass m1");
  require_positive(m2, "mass m2");
  require_positive(separation, "separation");
  ConformalData d;
  d.name_ = "brill_lindquist";
  d.radial_ = false;
  // Centre of mass at the origin so the dipole term of U vanishes.
  const double M = m1 + m2;
  d.poles_ = {{separation * m2 / M, m1, 0.0}, {-separation * m1 / M, m2, 0.0}};
  d.asym_.b = 0.5 * M;
  return d;
}

ConformalData ConformalData::from_radial_table(std::vector<double> r, std::vector<double> u,
                                               std::optional<double> r_fit, double fit_tolerance) {
  if (r.size() != u.size() || r.size() < 8) fail(ErrorKind::ValidationError, "radial table needs at least 8 (r, U) rows");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) fail(ErrorKind::ValidationError, "radial table: r must be positive (row " + std::to_string(i) + ")");
    if (!(u[i] > 0.0) || !std::isfinite(u[i]))
      fail(ErrorKind::ValidationError, "radial table: U must be positive (row " + std::to_string(i) + ")");
  }
  const double rf = r_fit.value_or(0.5 * r.back());
  std::vector<double> rr, uu;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= rf && r[i] <= 2.0 * rf) {
      rr.push_back(r[i]);
      uu.push_back(u[i]);
    }
  ConformalData d;
  d.name_ = "table";
  d.harmonic_ = false;
  d.asym_ = fit_asymptotics(rr, uu);
  d.asym_.tolerance = fit_tolerance;
  // Spline g = r (U - a): g'' vanishes wherever U is harmonic, so the
  // second derivatives entering R only carry interpolation error from the
  // matter region.
  std::vector<double> g(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) g[i] = r[i] * (u[i] - d.asym_.a);
  d.table_ = std::make_shared<CubicSpline>(std::move(r), std::move(g));
  return d;
}

Jet ConformalData::radial(double r) const {
  if (!radial_) fail(ErrorKind::DomainError, "radial profile requested for non-radial data");
  if (table_) {
    if (r < table_->x_min()) fail(ErrorKind::DomainError, "radius below tabulated range");
    if (r > table_->x_max()) {
      const Jet x = Jet::variable(r);
      return asym_.a + asym_.b * (Jet::constant(1.0) / x);
    }
    return asym_.a + (*table_)(r) / Jet::variable(r);
  }
  Jet u = Jet::constant(asym_.a);
  const Jet x = Jet::variable(r);
  for (const Pole& p : poles_) {
    const Jet s = pow(x * x + Jet::constant(p.eps * p.eps), 0.5);
    u = u + (0.5 * p.mass) * (Jet::constant(1.0) / s);
  }
  return u;
}

double ConformalData::factor(double rho, double z) const {
  if (table_) return radial(std::hypot(rho, z)).v;
  double u = asym_.a;
  for (const Pole& p : poles_) {
    const double dz = z - p.z;
    u += 0.5 * p.mass / std::sqrt(rho * rho + dz * dz + p.eps * p.eps);
  }
  return u;
}

Eigen::Vector2d ConformalData::gradient(double rho, double z) const {
  if (table_) {
    const double r = std::hypot(rho, z);
    const double du = radial(r).d1;
    return {du * rho / r, du * z / r};
  }
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (const Pole& p : poles_) {
    const double dz = z - p.z;
    const double s2 = rho * rho + dz * dz + p.eps * p.eps;
    const double c = -0.5 * p.mass / (s2 * std::sqrt(s2));
    g += c * Eigen::Vector2d(rho, dz);
  }
  return g;
}

double ConformalData::flat_laplacian(double rho, double z) const {
  if (table_) {
    const double r = std::hypot(rho, z);
    const Jet u = radial(r);
    return u.d2 + 2.0 * u.d1 / r;
  }
  double lap = 0.0;
  for (const Pole& p : poles_) {
    if (p.eps == 0.0) continue;
    const double dz = z - p.z;
    const double s = std::sqrt(rho * rho + dz * dz + p.eps * p.eps);
    lap += -1.5 * p.mass * p.eps * p.eps / std::pow(s, 5);
  }
  return lap;
}

double ConformalData::scalar_curvature(double rho, double z) const {
  const double u = factor(rho, z);
  return -8.0 * flat_laplacian(rho, z) / std::pow(u, 5);
}

double ConformalData::radial_domain_min() const { return table_ ? table_->x_min() : 0.0; }

double ConformalData::total_pole_mass() const {
  double m = 0.0;
  for (const Pole& p : poles_) m += p.mass;
  return m;
}

}  // namespace penrose
