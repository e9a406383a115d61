#include <algorithm>
#include <cmath>
#include <numbers>

#include "penrose/errors.hpp"
#include "penrose/surface.hpp"

namespace penrose::horizon {

namespace {

constexpr double kPi = std::numbers::pi;

int mirror_index(int k, int n) {
  while (k < 0 || k >= n) {
    if (k < 0) k = -k - 1;
    if (k >= n) k = 2 * n - k - 1;
  }
  return k;
}

double curve_area(const Curve& c, const std::function<double(double, double)>& w4) {
  const int n = c.size();
  const double dth = kPi / n;
  double area = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = c.theta(k);
    const double hp = (c.h[mirror_index(k + 1, n)] - c.h[mirror_index(k - 1, n)]) / (2.0 * dth);
    const double h = c.h[k];
    // exact cell integral of sin(theta) as the weight
    area += w4(c.rho(k), c.z(k)) * h * std::sqrt(h * h + hp * hp) * 2.0 * std::sin(th) * std::sin(0.5 * dth);
  }
  return 2.0 * kPi * area;
}

}  // namespace

double Curve::theta(int k) const { return (k + 0.5) * kPi / size(); }
double Curve::rho(int k) const { return h[k] * std::sin(theta(k)); }
double Curve::z(int k) const { return center + h[k] * std::cos(theta(k)); }

double Curve::radius_at(double th) const {
  const int n = size();
  const double pos = th / (kPi / n) - 0.5;
  const int k = static_cast<int>(std::floor(pos));
  const double t = pos - k;
  const double f0 = h[mirror_index(k - 1, n)], f1 = h[mirror_index(k, n)];
  const double f2 = h[mirror_index(k + 1, n)], f3 = h[mirror_index(k + 2, n)];
  // Cubic Lagrange through nodes -1, 0, 1, 2.
  return f0 * (-t * (t - 1) * (t - 2) / 6.0) + f1 * ((t + 1) * (t - 1) * (t - 2) / 2.0) +
         f2 * (-(t + 1) * t * (t - 2) / 2.0) + f3 * ((t + 1) * t * (t - 1) / 6.0);
}

Surface Surface::sphere(double r) {
  if (!(r > 0.0)) fail(ErrorKind::DomainError, "sphere radius must be positive");
  Surface s;
  s.kind = SurfaceKind::Sphere;
  s.radius = r;
  return s;
}

Surface Surface::curves(std::vector<Curve> c) {
  Surface s;
  if (c.empty()) return s;
  s.kind = SurfaceKind::Axisymmetric;
  s.components = std::move(c);
  return s;
}

int Surface::component_count() const noexcept {
  switch (kind) {
    case SurfaceKind::Empty: return 0;
    case SurfaceKind::Sphere: return 1;
    case SurfaceKind::Axisymmetric: return static_cast<int>(components.size());
  }
  return 0;
}

bool Surface::contains(double rho, double z) const {
  if (kind == SurfaceKind::Empty) return false;
  if (kind == SurfaceKind::Sphere) return rho * rho + z * z < radius * radius;
  for (const Curve& c : components) {
    const double dz = z - c.center;
    const double r = std::hypot(rho, dz);
    if (r == 0.0 || r < c.radius_at(std::atan2(rho, dz))) return true;
  }
  return false;
}

RadialRoots minimal_sphere_radius(const std::function<Jet(double)>& W, double r_lo, double r_hi,
                                  int points_per_decade) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) fail(ErrorKind::DomainError, "root scan needs 0 < r_lo < r_hi");
  auto F = [&](double r) {
    const Jet w = W(r);
    return w.v + 2.0 * r * w.d1;
  };
  RadialRoots out;
  const int n = std::max(8, static_cast<int>(std::ceil(std::log10(r_hi / r_lo) * points_per_decade)));
  const double q = std::pow(r_lo / r_hi, 1.0 / n);
  double r1 = r_hi, f1 = F(r1);
  for (int k = 1; k <= n; ++k) {
    const double r0 = k == n ? r_lo : r_hi * std::pow(q, k);
    const double f0 = F(r0);
    if (f0 == 0.0) {
      out.radii.push_back(r0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      double lo = r0, hi = r1, flo = f0;
      while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double fm = F(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.radii.push_back(0.5 * (lo + hi));
    }
    r1 = r0;
    f1 = f0;
  }
  if (!out.radii.empty()) out.outermost = out.radii.front();
  return out;
}

RadialRoots minimal_sphere_radius(const ConformalData& data) {
  const double scale = std::max(data.asymptotics().b, 1e-6);
  const double lo = std::max(1e-4 * scale, data.radial_domain_min());
  return minimal_sphere_radius([&](double r) { return data.radial(r); }, lo, 1e3 * scale + 10.0 * lo);
}

double surface_area(const Surface& s, const ConformalData& data, const ExtraFactor& extra) {
  auto w4 = [&](double rho, double z) {
    const double w = data.factor(rho, z) * (extra ? extra(rho, z) : 1.0);
    return std::pow(w, 4);
  };
  switch (s.kind) {
    case SurfaceKind::Empty: return 0.0;
    case SurfaceKind::Sphere:
      if (data.is_radial()) return 4.0 * kPi * s.radius * s.radius * w4(0.0, s.radius);
      return curve_area(Curve{0.0, std::vector<double>(128, s.radius)}, w4);
    case SurfaceKind::Axisymmetric: {
      double a = 0.0;
      for (const Curve& c : s.components) a += curve_area(c, w4);
      return a;
    }
  }
  return 0.0;
}

namespace {

std::vector<std::pair<double, double>> samples(const Surface& s) {
  std::vector<std::pair<double, double>> pts;
  if (s.kind == SurfaceKind::Sphere) {
    for (int k = 0; k < 64; ++k) {
      const double th = (k + 0.5) * kPi / 64;
      pts.emplace_back(s.radius * std::sin(th), s.radius * std::cos(th));
    }
  }
  for (const Curve& c : s.components)
    for (int k = 0; k < c.size(); ++k) pts.emplace_back(c.rho(k), c.z(k));
  return pts;
}

}  // namespace

bool encloses(const Surface& outer, const Surface& inner) {
  if (outer.is_empty()) return false;
  if (inner.is_empty()) return true;
  if (outer.kind == SurfaceKind::Sphere && inner.kind == SurfaceKind::Sphere) return outer.radius > inner.radius;
  for (const auto& [rho, z] : samples(inner))
    if (!outer.contains(rho, z)) return false;
  return true;
}

}  // namespace penrose::horizon
