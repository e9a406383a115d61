#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "penrose/errors.hpp"
#include "penrose/surface.hpp"

namespace penrose::horizon {

namespace {

constexpr double kPi = std::numbers::pi;

int mirror(int k, int n) { return k < 0 ? -k - 1 : (k >= n ? 2 * n - k - 1 : k); }

// h * (H_delta + 4 d_n log W): dimensionless, zero on a minimal curve.
void scaled_residual(const Curve& c, const FactorField& W, std::vector<double>& out) {
  const int n = c.size();
  const double dth = kPi / n;
  out.resize(n);
  for (int k = 0; k < n; ++k) {
    const double th = c.theta(k), s = std::sin(th), co = std::cos(th);
    const double h = c.h[k], hm = c.h[mirror(k - 1, n)], hp = c.h[mirror(k + 1, n)];
    const double d1 = (hp - hm) / (2.0 * dth), d2 = (hp - 2.0 * h + hm) / (dth * dth);
    const double rp = d1 * s + h * co, zp = d1 * co - h * s;
    const double rpp = d2 * s + 2.0 * d1 * co - h * s, zpp = d2 * co - 2.0 * d1 * s - h * co;
    const double L = std::hypot(rp, zp), rho = h * s, z = c.center + h * co;
    const double k1 = (zp * rpp - rp * zpp) / (L * L * L);
    const double k2 = -zp / (L * rho);
    const Eigen::Vector2d g = W.gradient(rho, z);
    const double dn = (g.x() * (-zp) + g.y() * rp) / L;
    out[k] = h * (k1 + k2 + 4.0 * dn / W.value(rho, z));
  }
}

double sup(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
}

enum class Outcome { Converged, Pinched, Collapsed, Stalled };

struct Relaxed {
  Curve curve;
  Outcome outcome = Outcome::Stalled;
  double residual = 0.0;
  int iterations = 0;
};

bool pinched(const Curve& c, double cells) {
  const auto [lo, hi] = std::minmax_element(c.h.begin(), c.h.end());
  return *lo < cells * (kPi / c.size()) * *hi;
}

// Pseudo-transient continuation in y = log h with a tridiagonal
// finite-difference Jacobian (three colours) and switched evolution
// relaxation of the pseudo time step.
Relaxed relax(Curve c, const FactorField& W, const AxisymOptions& opt, bool allow_pinch, double dtau = 0.1) {
  const int n = c.size();
  Relaxed out;
  std::vector<double> r, rt, lower(n), diag(n), upper(n), rhs(n), step(n);
  scaled_residual(c, W, r);
  double norm = sup(r);
  const double collapse = 1e-4 * W.scale;
  for (int it = 0; it < opt.max_iterations; ++it) {
    out.iterations = it;
    if (norm < opt.tolerance) {
      out.outcome = Outcome::Converged;
      break;
    }
    std::fill(lower.begin(), lower.end(), 0.0);
    std::fill(upper.begin(), upper.end(), 0.0);
    std::fill(diag.begin(), diag.end(), 0.0);
    const double eps = 1e-7;
    for (int colour = 0; colour < 3; ++colour) {
      Curve p = c;
      for (int j = colour; j < n; j += 3) p.h[j] *= std::exp(eps);
      scaled_residual(p, W, rt);
      for (int k = 0; k < n; ++k) {
        for (int j = std::max(0, k - 1); j <= std::min(n - 1, k + 1); ++j) {
          if (j % 3 != colour) continue;
          const double d = (rt[k] - r[k]) / eps;
          if (j == k) diag[k] += d;
          else if (j < k) lower[k] += d;
          else upper[k] += d;
        }
      }
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      // Thomas sweep on (I / dtau + J) step = -r.
      std::vector<double> cp(n), dp(n);
      double b = 1.0 / dtau + diag[0];
      cp[0] = upper[0] / b;
      dp[0] = -r[0] / b;
      for (int k = 1; k < n; ++k) {
        b = 1.0 / dtau + diag[k] - lower[k] * cp[k - 1];
        cp[k] = upper[k] / b;
        dp[k] = (-r[k] - lower[k] * dp[k - 1]) / b;
      }
      step[n - 1] = dp[n - 1];
      for (int k = n - 2; k >= 0; --k) step[k] = dp[k] - cp[k] * step[k + 1];
      const double big = sup(step);
      if (!std::isfinite(big)) {
        dtau *= 0.25;
        continue;
      }
      const double damp = big > 0.2 ? 0.2 / big : 1.0;
      Curve trial = c;
      for (int k = 0; k < n; ++k) trial.h[k] *= std::exp(damp * step[k]);
      scaled_residual(trial, W, rt);
      const double trial_norm = sup(rt);
      if (!(trial_norm < 2.0 * norm + 1e-12)) {
        dtau *= 0.25;
        continue;
      }
      accepted = true;
      dtau = std::min(1e12, dtau * std::clamp(norm / std::max(trial_norm, 1e-300), 0.5, 4.0));
      c = std::move(trial);
      r.swap(rt);
      norm = trial_norm;
    }
    if (!accepted) break;
    if (*std::max_element(c.h.begin(), c.h.end()) < collapse) {
      out.outcome = Outcome::Collapsed;
      out.curve = std::move(c);
      out.residual = norm;
      return out;
    }
    if (!allow_pinch && pinched(c, opt.pinch_cells)) {
      out.outcome = Outcome::Pinched;
      break;
    }
  }
  if (norm < opt.tolerance) out.outcome = Outcome::Converged;
  out.curve = std::move(c);
  out.residual = norm;
  return out;
}

Curve circle(double center, double radius, int n) {
  Curve c;
  c.center = center;
  c.h.assign(n, radius);
  return c;
}

void check(const AxisymOptions& opt) {
  if (opt.angular_cells < 8) fail(ErrorKind::DomainError, "axisymmetric finder needs at least 8 angular cells");
  if (!(opt.tolerance > 0.0) || opt.max_iterations < 1)
    fail(ErrorKind::DomainError, "axisymmetric finder needs a positive tolerance and iteration budget");
}

}  // namespace

FactorField factor_field(const ConformalData& data) {
  FactorField W;
  W.value = [&data](double rho, double z) { return data.factor(rho, z); };
  W.gradient = [&data](double rho, double z) { return data.gradient(rho, z); };
  for (const auto& p : data.poles()) W.pole_z.push_back(p.z);
  const double m = data.total_pole_mass();
  const double b = 2.0 * data.asymptotics().b;
  W.scale = m > 0.0 ? m : (b > 0.0 ? b : 1.0);
  return W;
}

std::vector<double> mean_curvature(const Curve& c, const FactorField& W) {
  std::vector<double> r;
  scaled_residual(c, W, r);
  for (int k = 0; k < c.size(); ++k) {
    const double w = W.value(c.rho(k), c.z(k));
    r[k] /= c.h[k] * w * w;
  }
  return r;
}

AxisymResult outermost_surface_axisym(const FactorField& W, const AxisymOptions& opt) {
  check(opt);
  const int n = opt.angular_cells;
  double center = 0.0, spread = 0.0;
  if (!W.pole_z.empty()) {
    const auto [lo, hi] = std::minmax_element(W.pole_z.begin(), W.pole_z.end());
    center = 0.5 * (*lo + *hi);
    spread = 0.5 * (*hi - *lo);
  }
  const double start = opt.start_radius > 0.0 ? opt.start_radius : 10.0 * W.scale + 2.0 * spread;
  AxisymResult res;
  Relaxed common = relax(circle(center, start, n), W, opt, false);
  res.iterations = common.iterations;
  if (common.outcome == Outcome::Converged) {
    res.surface = Surface::curves({common.curve});
    res.residual = common.residual;
    return res;
  }
  if (common.outcome == Outcome::Collapsed) return res;
  if (common.outcome == Outcome::Stalled || W.pole_z.size() < 2)
    fail(ErrorKind::HorizonNotConverged,
         "common horizon search stalled at residual " + std::to_string(common.residual));

  // The enclosing curve pinched: look for one horizon per pole.
  res.split = true;
  std::vector<Curve> parts;
  for (std::size_t i = 0; i < W.pole_z.size(); ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < W.pole_z.size(); ++j)
      if (j != i) gap = std::min(gap, std::abs(W.pole_z[j] - W.pole_z[i]));
    Relaxed part = relax(circle(W.pole_z[i], 0.45 * gap, n), W, opt, false);
    res.iterations += part.iterations;
    if (part.outcome == Outcome::Collapsed) continue;
    if (part.outcome != Outcome::Converged)
      fail(ErrorKind::HorizonNotConverged, "horizon around pole " + std::to_string(i) + " did not converge");
    res.residual = std::max(res.residual, part.residual);
    parts.push_back(std::move(part.curve));
  }
  if (!parts.empty()) res.surface = Surface::curves(std::move(parts));
  return res;
}

AxisymResult outermost_surface_axisym(const ConformalData& data, const AxisymOptions& opt) {
  return outermost_surface_axisym(factor_field(data), opt);
}

AxisymResult refine_surface_axisym(const Surface& guess, const FactorField& W, const AxisymOptions& opt) {
  check(opt);
  AxisymResult res;
  std::vector<Curve> start;
  if (guess.kind == SurfaceKind::Sphere) start.push_back(circle(0.0, guess.radius, opt.angular_cells));
  else start = guess.components;
  std::vector<Curve> parts;
  for (const Curve& c : start) {
    // Warm starts are close to the answer: begin near a pure Newton step.
    Relaxed part = relax(c, W, opt, true, 1e4);
    res.iterations += part.iterations;
    if (part.outcome == Outcome::Collapsed) continue;
    if (part.outcome != Outcome::Converged)
      fail(ErrorKind::HorizonNotConverged, "surface refinement stalled at residual " + std::to_string(part.residual));
    res.residual = std::max(res.residual, part.residual);
    parts.push_back(std::move(part.curve));
  }
  if (!parts.empty()) res.surface = Surface::curves(std::move(parts));
  return res;
}

}  // namespace penrose::horizon
