#include "penrose/elliptic.hpp"

#include <algorithm>
#include <cmath>

#include "penrose/errors.hpp"
#include "penrose/polar_solver.hpp"

namespace penrose::elliptic {

BoundarySpec BoundarySpec::dirichlet(horizon::Surface s, double value) {
  BoundarySpec b;
  b.kind = BoundaryKind::Dirichlet;
  b.surface = std::move(s);
  b.value = value;
  return b;
}

BoundarySpec BoundarySpec::robin(horizon::Surface s, double coefficient) {
  BoundarySpec b;
  b.kind = BoundaryKind::Robin;
  b.surface = std::move(s);
  b.coefficient = coefficient;
  return b;
}

BoundarySpec BoundarySpec::none() { return {}; }

Jet RadialMode::profile(double r) const {
  if (kind == AsymptoteKind::Constant) return alpha + beta * basis->K(r);
  return alpha * basis->growing(r) + beta * basis->decaying(r);
}

bool HarmonicField::inside(double rho, double z) const { return boundary.surface.contains(rho, z); }

double HarmonicField::value(double rho, double z) const {
  if (inside_value && inside(rho, z)) return *inside_value;
  if (radial) {
    const double r = std::hypot(rho, z);
    const Jet p = radial->profile(r);
    return radial->kind == AsymptoteKind::Constant ? p.v : p.v * z / r;
  }
  if (polar) return polar->value(rho, z);
  if (custom_value) return custom_value(rho, z);
  fail(ErrorKind::DomainError, "harmonic field has no representation");
}

Eigen::Vector2d HarmonicField::gradient(double rho, double z) const {
  if (inside_value && inside(rho, z)) return Eigen::Vector2d::Zero();
  if (radial) {
    const double r = std::hypot(rho, z);
    const Jet p = radial->profile(r);
    const Eigen::Vector2d xhat(rho / r, z / r);
    if (radial->kind == AsymptoteKind::Constant) return p.d1 * xhat;
    return (p.d1 - p.v / r) * (z / r) * xhat + Eigen::Vector2d(0.0, p.v / r);
  }
  if (polar) return polar->gradient(rho, z);
  if (custom_gradient) return custom_gradient(rho, z);
  fail(ErrorKind::DomainError, "harmonic field has no representation");
}

HarmonicField solve_exterior_harmonic(std::shared_ptr<const RadialBasis> basis, const BoundarySpec& bc,
                                      const AsymptoteSpec& asym) {
  if (!basis) fail(ErrorKind::DomainError, "missing radial basis");
  if (bc.surface.kind == horizon::SurfaceKind::Axisymmetric)
    fail(ErrorKind::DomainError, "radial closed-form path needs a sphere; use the grid path");
  if (bc.kind != BoundaryKind::None && bc.surface.kind != horizon::SurfaceKind::Sphere)
    fail(ErrorKind::DomainError, "boundary condition given without a surface");
  if (bc.value_profile || bc.coefficient_profile)
    fail(ErrorKind::DomainError, "angular boundary profiles need the grid path");
  if (!std::isfinite(asym.c)) fail(ErrorKind::DomainError, "asymptote constant must be finite");

  RadialMode mode;
  mode.kind = asym.kind;
  mode.alpha = asym.c;
  mode.basis = basis;
  const double R = bc.surface.radius;
  // Basis functions (growing/decaying) at R.
  Jet g, d;
  if (bc.kind != BoundaryKind::None) {
    if (R < basis->data().radial_domain_min()) fail(ErrorKind::DomainError, "surface below the chart");
    if (asym.kind == AsymptoteKind::Constant) {
      g = Jet::constant(1.0);
      d = basis->K(R);
    } else {
      g = basis->growing(R);
      d = basis->decaying(R);
    }
  }
  const double c = asym.c;
  switch (bc.kind) {
    case BoundaryKind::None: mode.beta = 0.0; break;
    case BoundaryKind::Dirichlet: mode.beta = (bc.value - c * g.v) / d.v; break;
    case BoundaryKind::Robin: {
      const double k = bc.coefficient;
      const double den = d.d1 - k * d.v;
      if (den == 0.0) fail(ErrorKind::SolverDiverged, "Robin problem is singular for this coefficient");
      mode.beta = c * (k * g.v - g.d1) / den;
      break;
    }
  }
  HarmonicField f;
  f.boundary = bc;
  f.asymptote = asym;
  f.radial = mode;
  if (bc.kind != BoundaryKind::None) {
    const Jet p = mode.profile(R);
    f.stats.boundary_residual =
        bc.kind == BoundaryKind::Dirichlet ? std::abs(p.v - bc.value) : std::abs(p.d1 - bc.coefficient * p.v);
  }
  return f;
}

namespace {

// K_W(r) = int_r^inf ds / (s^2 W^2) beyond r_far from the local a + b/r form.
double tail_K(const Jet& W, double r) {
  const double B = -r * r * W.d1, A = W.v - B / r;
  return 1.0 / (A * (A * r + B));
}

}  // namespace

double DoubledField::value(double r, int sheet) const {
  const double yR = std::log(R);
  const double y0 = yR + (sheet >= 0 ? 1.0 : -1.0) * std::log(r / R);
  if (y0 <= y.front()) return values.front();
  if (y0 >= y.back()) return values.back();
  const double h = y[1] - y[0];
  const auto k = std::min(static_cast<std::size_t>((y0 - y.front()) / h), y.size() - 2);
  const double t = (y0 - y[k]) / h;
  return (1.0 - t) * values[k] + t * values[k + 1];
}

DoubledField solve_doubled_harmonic(const std::function<Jet(double)>& W, double R, double limit_plus,
                                    double limit_minus, DoubledMethod method, int nodes_per_unit_log) {
  if (!(R > 0.0)) fail(ErrorKind::DomainError, "doubling surface must have positive radius");
  const double span = std::log(1e6);
  const int half = static_cast<int>(std::ceil(span * nodes_per_unit_log));
  const int n = 2 * half + 1;
  const double h = span / half;
  const double yR = std::log(R);

  DoubledField out;
  out.R = R;
  out.limit_plus = limit_plus;
  out.limit_minus = limit_minus;
  out.y.resize(n);
  for (int k = 0; k < n; ++k) out.y[k] = yR + (k - half) * h;
  auto sheet_r = [&](int k) { return R * std::exp(std::abs(k - half) * h); };

  if (method == DoubledMethod::Reflection) {
    // One sheet, Dirichlet (L+ + L-)/2 on the gluing sphere.
    std::vector<double> K(half + 1);
    const double r_far = sheet_r(n - 1);
    K[half] = tail_K(W(r_far), r_far);
    auto integrand = [&](double yy) {
      const double r = std::exp(yy);
      const double w = W(r).v;
      return 1.0 / (r * w * w);
    };
    for (int k = half - 1; k >= 0; --k) {
      const double ya = yR + k * h;
      K[k] = K[k + 1] + h / 6.0 * (integrand(ya) + 4.0 * integrand(ya + 0.5 * h) + integrand(ya + h));
    }
    const double mid = 0.5 * (limit_plus + limit_minus);
    const double bp = (mid - limit_plus) / K[0], bm = (mid - limit_minus) / K[0];
    out.values.resize(n);
    for (int k = 0; k < n; ++k) {
      const int j = std::abs(k - half);
      out.values[k] = k >= half ? limit_plus + bp * K[j] : limit_minus + bm * K[j];
    }
    return out;
  }

  // Direct: (mu f_y)_y = 0 with mu = r W^2 along the mirrored line, flux
  // conditions at both truncated ends that reproduce f = L + beta K_W.
  std::vector<double> mu(n), muh(n - 1);
  for (int k = 0; k < n; ++k) {
    const double r = sheet_r(k);
    const double w = W(r).v;
    mu[k] = r * w * w;
  }
  for (int k = 0; k + 1 < n; ++k) {
    const double r = R * std::exp(std::abs(k + 0.5 - half) * h);
    const double w = W(r).v;
    muh[k] = r * w * w;
  }
  const double r_far = sheet_r(0);
  const Jet Wf = W(r_far);
  const double kappa = (-1.0 / (r_far * Wf.v * Wf.v)) / tail_K(Wf, r_far);  // (K_y / K) at the far end

  std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
  for (int k = 1; k + 1 < n; ++k) {
    lo[k] = muh[k - 1];
    up[k] = muh[k];
    di[k] = -(muh[k - 1] + muh[k]);
  }
  // f_y = kappa (f - L) in sheet-local log radius, outward at both ends.
  di[n - 1] = mu[n - 1] * kappa - muh[n - 2] / h;
  lo[n - 1] = muh[n - 2] / h;
  rhs[n - 1] = mu[n - 1] * kappa * limit_plus;
  di[0] = mu[0] * kappa - muh[0] / h;
  up[0] = muh[0] / h;
  rhs[0] = mu[0] * kappa * limit_minus;

  std::vector<double> cp(n), dp(n);
  cp[0] = up[0] / di[0];
  dp[0] = rhs[0] / di[0];
  for (int k = 1; k < n; ++k) {
    const double m = di[k] - lo[k] * cp[k - 1];
    cp[k] = up[k] / m;
    dp[k] = (rhs[k] - lo[k] * dp[k - 1]) / m;
  }
  out.values.resize(n);
  out.values[n - 1] = dp[n - 1];
  for (int k = n - 2; k >= 0; --k) out.values[k] = dp[k] - cp[k] * out.values[k + 1];

  double res = 0.0, scale = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    res = std::max(res, std::abs(lo[k] * out.values[k - 1] + di[k] * out.values[k] + up[k] * out.values[k + 1]));
    scale = std::max(scale, std::abs(di[k] * out.values[k]));
  }
  out.stats.residual = scale > 0.0 ? res / scale : 0.0;
  out.stats.iterations = 1;
  return out;
}

}  // namespace penrose::elliptic
