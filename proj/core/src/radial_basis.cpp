#include "penrose/radial_basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "penrose/errors.hpp"

namespace penrose::elliptic {

namespace {

bool is_pure_pole(const ConformalData& d) {
  if (!d.is_radial() || d.is_tabulated()) return false;
  const auto poles = d.poles();
  return poles.empty() || (poles.size() == 1 && poles[0].eps == 0.0 && poles[0].z == 0.0);
}

// Cubic Hermite on [0, 1] with end values and slopes already scaled by h.
struct Hermite {
  double v, dv;
};
Hermite hermite(double f0, double s0, double f1, double s1, double t, double h) {
  const double t2 = t * t, t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * s0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * s1;
  const double dv = ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * s0 + (-6 * t2 + 6 * t) * f1 + (3 * t2 - 2 * t) * h * s1) / h;
  return {v, dv};
}

}  // namespace

RadialBasis::RadialBasis(const ConformalData& data) : data_(data) {
  if (!data.is_radial()) fail(ErrorKind::DomainError, "radial basis needs radial data");
  closed_ = is_pure_pole(data);
  if (closed_) return;

  double scale = std::max(data.asymptotics().b, 1e-3);
  double core = scale;
  for (const Pole& p : data.poles()) core = std::min(core, std::max(p.eps, 1e-3 * scale));
  r_lo_ = data.is_tabulated() ? data.radial_domain_min() : 1e-4 * core;
  r_hi_ = 1e5 * scale;
  y0_ = std::log(r_lo_);
  const double span = std::log(r_hi_) - y0_;
  n_ = static_cast<int>(std::ceil(span / 1e-3)) + 1;
  hy_ = span / (n_ - 1);

  const double a = data.asymptotics().a, b = data.asymptotics().b;
  auto kprime_y = [&](double y) {
    const double r = std::exp(y);
    const double u = data_.radial(r).v;
    return -1.0 / (r * u * u);
  };

  K_.f.assign(n_, 0.0);
  K_.fy.assign(n_, 0.0);
  K_.f[n_ - 1] = 1.0 / (a * (a * r_hi_ + b));
  for (int k = n_ - 1; k >= 0; --k) {
    const double y = y0_ + k * hy_;
    K_.fy[k] = kprime_y(y);
    if (k < n_ - 1) {
      const double ym = y + 0.5 * hy_;
      K_.f[k] = K_.f[k + 1] - hy_ / 6.0 * (K_.fy[k] + 4.0 * kprime_y(ym) + K_.fy[k + 1]);
    }
  }

  // (h, h_y)' = (h_y, 2h - c h_y)
  auto rk4 = [&](double y, Eigen::Vector2d s, double h) {
    auto F = [&](double yy, const Eigen::Vector2d& q) {
      return Eigen::Vector2d(q[1], 2.0 * q[0] - coeff(std::exp(yy)) * q[1]);
    };
    const Eigen::Vector2d k1 = F(y, s);
    const Eigen::Vector2d k2 = F(y + 0.5 * h, s + 0.5 * h * k1);
    const Eigen::Vector2d k3 = F(y + 0.5 * h, s + 0.5 * h * k2);
    const Eigen::Vector2d k4 = F(y + h, s + h * k3);
    return Eigen::Vector2d(s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };

  plus_.f.assign(n_, 0.0);
  plus_.fy.assign(n_, 0.0);
  Eigen::Vector2d s(r_lo_, r_lo_);
  for (int k = 0; k < n_; ++k) {
    plus_.f[k] = s[0];
    plus_.fy[k] = s[1];
    if (k < n_ - 1) s = rk4(y0_ + k * hy_, s, hy_);
  }

  // Split h at r_hi into a r / U and r^-2 / U using the local factor.
  const Jet U = data_.radial(r_hi_);
  const Jet x = Jet::variable(r_hi_);
  const Jet g = a * x / U, d = Jet::constant(1.0) / (x * x * U);
  Eigen::Matrix2d M;
  M << g.v, d.v, r_hi_ * g.d1, r_hi_ * d.d1;
  const Eigen::Vector2d ab = M.partialPivLu().solve(Eigen::Vector2d(plus_.f[n_ - 1], plus_.fy[n_ - 1]));
  for (int k = 0; k < n_; ++k) {
    plus_.f[k] /= ab[0];
    plus_.fy[k] /= ab[0];
  }
  plus_tail_ = ab[1] / ab[0];

  minus_.f.assign(n_, 0.0);
  minus_.fy.assign(n_, 0.0);
  s = Eigen::Vector2d(d.v, r_hi_ * d.d1);
  for (int k = n_ - 1; k >= 0; --k) {
    minus_.f[k] = s[0];
    minus_.fy[k] = s[1];
    if (k > 0) s = rk4(y0_ + k * hy_, s, -hy_);
  }
}

double RadialBasis::coeff(double r) const {
  const Jet u = data_.radial(r);
  return 1.0 + 2.0 * r * u.d1 / u.v;
}

Jet RadialBasis::interpolate(const Table& t, double r) const {
  const double y = std::log(r);
  const double pos = (y - y0_) / hy_;
  const int k = std::clamp(static_cast<int>(std::floor(pos)), 0, n_ - 2);
  const Hermite h = hermite(t.f[k], t.fy[k], t.f[k + 1], t.fy[k + 1], pos - k, hy_);
  const double hyy = 2.0 * h.v - coeff(r) * h.dv;
  return {h.v, h.dv / r, (hyy - h.dv) / (r * r)};
}

Jet RadialBasis::K(double r) const {
  const Jet x = Jet::variable(r);
  const double a = data_.asymptotics().a, b = data_.asymptotics().b;
  if (closed_) return Jet::constant(1.0) / (a * (a * x + Jet::constant(b)));
  if (r >= r_hi_) return Jet::constant(1.0) / (a * (a * x + Jet::constant(b)));
  const Jet u = data_.radial(r);
  // K' = -1/(r^2 U^2) exactly; only the value is interpolated.
  const Jet kp = -(Jet::constant(1.0) / (x * x * u * u));
  double v;
  if (r <= r_lo_) {
    v = K_.f[0] + (1.0 / r - 1.0 / r_lo_) / (u.v * u.v);
  } else {
    const double pos = (std::log(r) - y0_) / hy_;
    const int k = std::clamp(static_cast<int>(std::floor(pos)), 0, n_ - 2);
    v = hermite(K_.f[k], K_.fy[k], K_.f[k + 1], K_.fy[k + 1], pos - k, hy_).v;
  }
  return {v, kp.v, kp.d1};
}

Jet RadialBasis::growing(double r) const {
  const double a = data_.asymptotics().a;
  const Jet x = Jet::variable(r);
  const Jet u = data_.radial(r);
  if (closed_) return a * x / u;
  if (r >= r_hi_) return a * x / u + plus_tail_ * (Jet::constant(1.0) / (x * x * u));
  if (r <= r_lo_) return (plus_.f[0] / r_lo_) * x;
  return interpolate(plus_, r);
}

Jet RadialBasis::decaying(double r) const {
  const Jet x = Jet::variable(r);
  const Jet u = data_.radial(r);
  if (closed_ || r >= r_hi_) return Jet::constant(1.0) / (x * x * u);
  if (r <= r_lo_) return (minus_.f[0] * r_lo_ * r_lo_) * (Jet::constant(1.0) / (x * x));
  return interpolate(minus_, r);
}

}  // namespace penrose::elliptic
