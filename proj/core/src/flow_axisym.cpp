#include <algorithm>
#include <cmath>
#include <numbers>

#include "flow_internal.hpp"
#include "penrose/errors.hpp"

namespace penrose::flow::detail {

namespace {

constexpr double kPi = std::numbers::pi;

// Sources on two inner copies of each curve plus a point at its centre.
std::vector<elliptic::RingSource> source_layout(const horizon::Surface& s, int per_component) {
  std::vector<elliptic::RingSource> out;
  const int m = std::max(2, per_component / 2);
  for (const horizon::Curve& c : s.components) {
    out.push_back({0.0, c.center, 0.0});
    for (double lambda : {0.5, 0.8}) {
      for (int j = 0; j < m; ++j) {
        const double th = (j + 0.5) * kPi / m;
        const double h = lambda * c.radius_at(th);
        out.push_back({h * std::sin(th), c.center + h * std::cos(th), 0.0});
      }
    }
  }
  return out;
}

std::vector<Eigen::Vector2d> collocation(const horizon::Surface& s) {
  std::vector<Eigen::Vector2d> out;
  for (const horizon::Curve& c : s.components) {
    const int n = 2 * c.size();
    for (int k = 0; k < n; ++k) {
      const double th = (k + 0.5) * kPi / n;
      const double h = c.radius_at(th);
      out.emplace_back(h * std::sin(th), c.center + h * std::cos(th));
    }
  }
  return out;
}

// Decaying flat-harmonic function outside `s` with boundary values f.
template <class F>
elliptic::FitResult exterior_fit(const horizon::Surface& s, int per_component, F&& f) {
  if (s.is_empty()) return {};
  const auto pts = collocation(s);
  std::vector<double> vals;
  vals.reserve(pts.size());
  for (const auto& p : pts) vals.push_back(f(p.x(), p.y()));
  return elliptic::fit_ring_charges(source_layout(s, per_component), pts, vals);
}

horizon::FactorField as_factor(const std::shared_ptr<const AxisymField>& f) {
  horizon::FactorField W;
  W.value = [f](double rho, double z) { return f->value(rho, z); };
  W.gradient = [f](double rho, double z) { return f->gradient(rho, z); };
  for (const auto& p : f->data->poles()) W.pole_z.push_back(p.z);
  const double m = f->data->total_pole_mass();
  W.scale = m > 0.0 ? m : 1.0;
  return W;
}

horizon::AxisymOptions finder_options(const FlowConfig& cfg) {
  horizon::AxisymOptions opt;
  opt.angular_cells = cfg.angular_cells;
  return opt;
}

horizon::Surface as_curves(const horizon::Surface& s, int n) {
  if (s.kind != horizon::SurfaceKind::Sphere) return s;
  horizon::Curve c;
  c.h.assign(n, s.radius);
  return horizon::Surface::curves({c});
}

double area_of(const horizon::Surface& s, const std::shared_ptr<const AxisymField>& f) {
  if (s.is_empty()) return 0.0;
  return horizon::surface_area(s, *f->data, [f](double rho, double z) {
    return f->value(rho, z) / f->data->factor(rho, z);
  });
}

struct Located {
  horizon::Surface sigma;
  bool jumped = false;
};

// Continues the previous surface; with `global` set, also searches inward
// from a large sphere and jumps when the outer candidate does not increase
// the area (the outermost minimal-area enclosure).
Located locate(const std::shared_ptr<const AxisymField>& f, const horizon::Surface& prev, bool global,
               const FlowConfig& cfg) {
  const auto W = as_factor(f);
  const auto opt = finder_options(cfg);
  Located out;
  if (!prev.is_empty()) out.sigma = horizon::refine_surface_axisym(as_curves(prev, opt.angular_cells), W, opt).surface;
  if (!global) return out;
  horizon::Surface candidate;
  try {
    candidate = horizon::outermost_surface_axisym(W, opt).surface;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::HorizonNotConverged) throw;
  }
  if (candidate.is_empty()) return out;
  if (out.sigma.is_empty()) {
    out.sigma = std::move(candidate);
    out.jumped = true;
    return out;
  }
  if (candidate.component_count() < out.sigma.component_count() && horizon::encloses(candidate, out.sigma) &&
      area_of(candidate, f) <= area_of(out.sigma, f) * (1.0 + 1e-9)) {
    out.sigma = std::move(candidate);
    out.jumped = true;
  }
  return out;
}

void diagnostics(FlowState& s) {
  const AxisymField& f = *s.field;
  const auto& asym = f.data->asymptotics();
  const double qH = f.H.monopole(), qG = f.G.monopole();
  s.mass = 2.0 * (f.c * asym.a) * (f.c * asym.b + qH);
  s.mass_tilde = 2.0 * (f.c * asym.a) * (f.c * asym.b + 0.5 * (qH - qG));
  s.components = s.sigma.component_count();
  s.solver_residual = f.fit_residual;
  s.area = area_of(s.sigma, s.field);

  // Distance of W from the closest alpha + beta / r along three rays.
  double r0 = std::max(asym.b, 1e-6);
  for (const auto& c : s.sigma.components)
    for (double h : c.h) r0 = std::max(r0, std::abs(c.center) + h);
  std::vector<double> rr, ww;
  for (double th : {0.0, 0.5 * kPi, kPi}) {
    for (int k = 0; k <= 20; ++k) {
      const double r = 2.0 * r0 * std::pow(1e3, k / 20.0);
      rr.push_back(r);
      ww.push_back(f.value(r * std::sin(th), r * std::cos(th)));
    }
  }
  double num = 0.0, den = 0.0, sr = 0.0, sw = 0.0;
  const std::vector<double>& rs = rr;
  const std::vector<double>& ws = ww;
  const double n = static_cast<double>(rs.size());
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double x = 1.0 / rs[k];
    sr += x;
    sw += ws[k];
  }
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double x = 1.0 / rs[k] - sr / n;
    num += x * (ws[k] - sw / n);
    den += x * x;
  }
  const double beta = den > 0.0 ? num / den : 0.0, alpha = (sw - beta * sr) / n;
  double dev = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) dev = std::max(dev, std::abs(ws[k] - alpha - beta / rs[k]) / std::abs(ws[k]));
  s.schwarzschild_deviation = dev;
}

std::shared_ptr<AxisymField> with_velocity(AxisymField f, const horizon::Surface& sigma, const FlowConfig& cfg) {
  const auto data = f.data;
  const double c = f.c;
  auto fit = exterior_fit(sigma, cfg.sources_per_component, [&](double rho, double z) { return c * data->factor(rho, z); });
  f.G = std::move(fit.expansion);
  f.fit_residual = std::max(f.fit_residual, fit.residual);
  return std::make_shared<AxisymField>(std::move(f));
}

FlowState heun_step(const FlowState& s, double dt, const FlowTrajectory& traj);

// A jump found at the end of a step happened somewhere inside it; halving
// the step around it keeps the area loss at the jump small.
FlowState advance_resolving_jumps(const FlowState& s, double dt, const FlowTrajectory& traj, int depth) {
  FlowState n = heun_step(s, dt, traj);
  if (!n.jumped || depth >= 6 || n.area >= s.area * (1.0 - 1e-5)) return n;
  FlowState mid = advance_resolving_jumps(s, 0.5 * dt, traj, depth + 1);
  FlowState end = advance_resolving_jumps(mid, 0.5 * dt, traj, depth + 1);
  end.jumped = end.jumped || mid.jumped;
  return end;
}

}  // namespace

FlowState axisym_initial_state(const FlowTrajectory& traj) {
  if (!traj.data().is_harmonic())
    fail(ErrorKind::DomainError, "axisymmetric flow needs a flat-harmonic conformal factor");
  AxisymField f;
  f.data = std::make_shared<const ConformalData>(traj.data());
  auto bare = std::make_shared<const AxisymField>(f);
  FlowState s;
  s.sigma = horizon::outermost_surface_axisym(as_factor(bare), finder_options(traj.config())).surface;
  s.field = with_velocity(std::move(f), s.sigma, traj.config());
  diagnostics(s);
  return s;
}

elliptic::HarmonicField axisym_velocity(const FlowState& s, const FlowTrajectory&) {
  elliptic::HarmonicField v;
  auto f = s.field;
  v.boundary = s.sigma.is_empty() ? elliptic::BoundarySpec::none() : elliptic::BoundarySpec::dirichlet(s.sigma, 0.0);
  v.asymptote = elliptic::AsymptoteSpec::constant(-std::exp(-s.t));
  v.custom_value = [f](double rho, double z) { return f->velocity(rho, z) / f->data->factor(rho, z); };
  v.custom_gradient = [f](double rho, double z) -> Eigen::Vector2d {
    const double U = f->data->factor(rho, z);
    return (f->velocity_gradient(rho, z) - f->velocity(rho, z) / U * f->data->gradient(rho, z)) / U;
  };
  v.inside_value = 0.0;
  return v;
}

double axisym_factor(const FlowState& s, double rho, double z) {
  if (!s.field) fail(ErrorKind::DomainError, "state carries no axisymmetric field");
  return s.field->value(rho, z);
}

namespace {

FlowState heun_step(const FlowState& s, double dt, const FlowTrajectory& traj) {
  const FlowConfig& cfg = traj.config();
  const AxisymField& f0 = *s.field;
  const double t1 = s.t + dt;

  // Predictor.
  AxisymField fp;
  fp.data = f0.data;
  fp.c = std::exp(-t1);
  fp.H = f0.H;
  fp.H.add(f0.G, dt);
  const auto pred = std::make_shared<const AxisymField>(fp);
  const horizon::Surface sigma_p = locate(pred, s.sigma, false, cfg).sigma;
  const auto pred_v = with_velocity(fp, sigma_p, cfg);

  // Corrector, then collapse the sources onto the predicted surface.
  AxisymField f1;
  f1.data = f0.data;
  f1.c = fp.c;
  f1.H = f0.H;
  f1.H.add(f0.G, 0.5 * dt);
  f1.H.add(pred_v->G, 0.5 * dt);
  f1.fit_residual = std::max(f0.fit_residual, pred_v->fit_residual);
  if (!sigma_p.is_empty()) {
    const auto& full = f1.H;
    auto fit = exterior_fit(sigma_p, cfg.sources_per_component, [&](double rho, double z) { return full.value(rho, z); });
    f1.H = std::move(fit.expansion);
    f1.fit_residual = std::max(f1.fit_residual, fit.residual);
  }
  const auto corr = std::make_shared<const AxisymField>(f1);
  const bool global = s.sigma.component_count() != 1;
  Located where = locate(corr, s.sigma, global, cfg);

  FlowState n;
  n.t = t1;
  n.sigma = std::move(where.sigma);
  n.jumped = where.jumped;
  n.field = with_velocity(std::move(f1), n.sigma, cfg);
  diagnostics(n);
  return n;
}

}  // namespace

FlowState axisym_advance(const FlowState& s, double dt, const FlowTrajectory& traj) {
  return advance_resolving_jumps(s, dt, traj, 0);
}

}  // namespace penrose::flow::detail
