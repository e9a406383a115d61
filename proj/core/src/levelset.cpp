#include "penrose/levelset.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "penrose/errors.hpp"
#include "penrose/geometry.hpp"
#include "parallel.hpp"
#include "radial_quadrature.hpp"

namespace penrose::levelset {

using detail::inner_radius;
using detail::mass_scale;
using detail::radial_curvature;
using detail::radial_exit_time;
using detail::radial_grid;
using detail::RadialGrid;

using elliptic::AsymptoteSpec;
using elliptic::BoundarySpec;
using elliptic::HarmonicField;

namespace {

const flow::FlowState& state_at(const flow::FlowTrajectory& traj, std::size_t k) {
  if (!traj.radial()) fail(ErrorKind::DomainError, "radial level-set path needs radial data");
  if (k >= traj.states.size()) fail(ErrorKind::DomainError, "slice index out of range");
  return traj.states[k];
}

double sigma_radius(const flow::FlowState& s) {
  return s.sigma.kind == horizon::SurfaceKind::Sphere ? s.sigma.radius : 0.0;
}

const elliptic::RadialMode& mode(const HarmonicField& f) {
  if (!f.radial) fail(ErrorKind::DomainError, "level-set slice needs closed-form radial fields");
  return *f.radial;
}

}  // namespace

HarmonicField solve_phi(const flow::FlowTrajectory& traj, std::size_t k) {
  const flow::FlowState& s = state_at(traj, k);
  const double R = sigma_radius(s);
  const double limit = std::exp(-s.t);
  if (R == 0.0) return elliptic::solve_exterior_harmonic(traj.basis(), BoundarySpec::none(), AsymptoteSpec::constant(limit));
  const double uR = traj.u_exterior(k, R).v;
  return elliptic::solve_exterior_harmonic(traj.basis(), BoundarySpec::dirichlet(s.sigma, 0.5 * uR),
                                           AsymptoteSpec::constant(limit));
}

std::pair<HarmonicField, HarmonicField> solve_pq(const flow::FlowTrajectory& traj, std::size_t k) {
  const flow::FlowState& s = state_at(traj, k);
  const double R = sigma_radius(s);
  const AsymptoteSpec asym = AsymptoteSpec::linear(std::exp(-3.0 * s.t));
  if (R == 0.0) {
    auto p = elliptic::solve_exterior_harmonic(traj.basis(), BoundarySpec::none(), asym);
    return {p, p};
  }
  // d_n p = p d_n log u on Sigma, with the exterior one-sided derivative of u.
  const Jet u = traj.u_exterior(k, R);
  const double kappa = u.d1 / u.v;
  auto p = elliptic::solve_exterior_harmonic(traj.basis(), BoundarySpec::robin(s.sigma, kappa), asym);
  auto q = elliptic::solve_exterior_harmonic(traj.basis(), BoundarySpec::dirichlet(s.sigma, 0.0), asym);
  return {std::move(p), std::move(q)};
}

LevelSetSlice assemble_slice(const flow::FlowTrajectory& traj, std::size_t k, HarmonicField phi, HarmonicField p,
                             HarmonicField q) {
  const flow::FlowState& s = state_at(traj, k);
  LevelSetSlice out;
  out.t = s.t;
  out.R = sigma_radius(s);
  out.A = s.A;
  out.B = s.B;
  out.u2_degenerate = mode(p).beta == mode(q).beta && mode(p).alpha == mode(q).alpha;
  out.phi = std::move(phi);
  out.p = std::move(p);
  out.q = std::move(q);
  return out;
}

LevelSetSlice solve_slice(const flow::FlowTrajectory& traj, std::size_t k) {
  auto phi = solve_phi(traj, k);
  auto [p, q] = solve_pq(traj, k);
  return assemble_slice(traj, k, std::move(phi), std::move(p), std::move(q));
}

std::vector<LevelSetSlice> solve_slices(const flow::FlowTrajectory& traj) {
  std::vector<LevelSetSlice> out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) out.push_back(solve_slice(traj, k));
  return out;
}

Jet LevelSetSlice::u(double r) const {
  const auto& basis = *mode(phi).basis;
  return B == 0.0 ? Jet::constant(A) : A + B * basis.K(r);
}

Jet LevelSetSlice::phi_profile(double r) const { return mode(phi).profile(r); }

Jet LevelSetSlice::H1(double r) const {
  const Jet x = Jet::variable(r);
  return (mode(p).profile(r) + mode(q).profile(r)) / (x * phi_profile(r));
}

Jet LevelSetSlice::H2(double r) const {
  if (u2_degenerate) return Jet::constant(0.0);
  const Jet x = Jet::variable(r);
  const auto& mp = mode(p);
  const auto& mq = mode(q);
  // The growing parts share the asymptote, so p - q is a pure decaying mode.
  const Jet diff = (mp.alpha - mq.alpha) * mp.basis->growing(r) + (mp.beta - mq.beta) * mp.basis->decaying(r);
  return diff / (x * (u(r) - phi_profile(r)));
}

namespace {

struct PointJets {
  double r = 0.0;
  Jet U, K, grow, decay;
};

PointJets point_jets(const elliptic::RadialBasis& basis, double r) {
  return {r, basis.data().radial(r), basis.K(r), basis.growing(r), basis.decaying(r)};
}

struct SliceCoef {
  double A = 1.0, B = 0.0;
  double phi_a = 0.0, phi_b = 0.0;
  double p_a = 0.0, p_b = 0.0, q_a = 0.0, q_b = 0.0;
  bool degenerate = false;
};

SliceCoef coefficients(const LevelSetSlice& s) {
  SliceCoef c;
  c.A = s.A;
  c.B = s.B;
  c.phi_a = mode(s.phi).alpha;
  c.phi_b = mode(s.phi).beta;
  c.p_a = mode(s.p).alpha;
  c.p_b = mode(s.p).beta;
  c.q_a = mode(s.q).alpha;
  c.q_b = mode(s.q).beta;
  c.degenerate = s.u2_degenerate;
  return c;
}

// |grad f|_g and |T|^2_g / |grad f|_g for f = H(r) z, with T the
// Hessian corrected by the conformal weight exp(omega).
struct Term {
  double grad = 0.0;
  double p = 0.0;
  bool guarded = false;
};

Term term(const Jet& H, const Jet& omega, const Jet& U, double r, double mu, double guard) {
  const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  const Eigen::Vector3d xh(st, 0.0, mu);
  const Eigen::Vector3d ez(0.0, 0.0, 1.0);
  const double z = r * mu;
  const Eigen::Vector3d df = H.d1 * z * xh + H.v * ez;
  const Eigen::Matrix3d P = xh * xh.transpose();
  const Eigen::Matrix3d mix = xh * ez.transpose();
  const Eigen::Matrix3d d2f =
      H.d2 * z * P + (H.d1 * z / r) * (Eigen::Matrix3d::Identity() - P) + H.d1 * (mix + mix.transpose());
  const double u2 = U.v * U.v;
  Term out;
  out.grad = df.norm() / u2;
  const double scale = (std::abs(H.v) + r * std::abs(H.d1)) / u2;
  if (!(out.grad > guard * scale)) {
    out.guarded = scale > 0.0;
    out.grad = std::isfinite(out.grad) ? out.grad : 0.0;
    return out;
  }
  const Eigen::Matrix3d T = geometry::conformal_hessian(d2f, df, omega.d1 / omega.v * xh);
  out.p = T.squaredNorm() / (u2 * u2 * u2 * u2) / out.grad;
  return out;
}

Density density_at(const SliceCoef& c, const PointJets& pj, double mu, const LevelSetConfig& cfg) {
  Density d;
  const Jet x = Jet::variable(pj.r);
  const Jet u = c.B == 0.0 ? Jet::constant(c.A) : c.A + c.B * pj.K;
  const Jet phi = c.phi_b == 0.0 ? Jet::constant(c.phi_a) : c.phi_a + c.phi_b * pj.K;
  const Jet hp = c.p_a * pj.grow + c.p_b * pj.decay;
  const Jet hq = c.q_a * pj.grow + c.q_b * pj.decay;
  // omega carries the factor itself; term() only needs its log-derivative.
  const Term t1 = term((hp + hq) / (x * phi), pj.U * phi, pj.U, pj.r, mu, cfg.guard);
  d.grad1 = t1.grad;
  d.p1 = t1.p;
  d.guards += t1.guarded ? 1 : 0;
  if (c.degenerate) return d;
  const Jet w = u - phi;
  if (!(w.v > cfg.guard * std::abs(u.v))) {
    ++d.guards;
    return d;
  }
  const Jet diff = (c.p_a - c.q_a) * pj.grow + (c.p_b - c.q_b) * pj.decay;
  const Jet weight = cfg.p_factor_j2 == PFactor::UMinusPhi ? pj.U * w : pj.U * phi;
  const Term t2 = term(diff / (x * w), weight, pj.U, pj.r, mu, cfg.guard);
  d.grad2 = t2.grad;
  d.p2 = t2.p;
  d.guards += t2.guarded ? 1 : 0;
  return d;
}

}  // namespace

Density density(const LevelSetSlice& s, const ConformalData& data, double r, double mu, const LevelSetConfig& cfg) {
  (void)data;
  return density_at(coefficients(s), point_jets(*mode(s.phi).basis, r), mu, cfg);
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int n) {
  if (n < 1) fail(ErrorKind::DomainError, "Gauss-Legendre needs at least one node");
  // Golub-Welsch on [-1, 1], then mapped to [0, 1].
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    x[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
    w[i] = v * v;  // weights on [-1, 1] sum to 2, halved by the map
  }
  return {x, w};
}

namespace {

detail::PointIntegral integrate_point(const std::vector<SliceCoef>& coefs, const std::vector<double>& times,
                                      const PointJets& pj, double mu, double t_exit, const LevelSetConfig& cfg) {
  return detail::integrate_in_time(times, t_exit, [&](std::size_t k) {
    const Density d = density_at(coefs[k], pj, mu, cfg);
    return detail::TimeSample{d.grad1 + d.grad2, d.p1 + d.p2, d.guards};
  });
}

std::vector<SliceCoef> all_coefficients(const std::vector<LevelSetSlice>& slices, std::vector<double>& times) {
  std::vector<SliceCoef> coefs;
  coefs.reserve(slices.size());
  times.clear();
  for (const auto& s : slices) {
    coefs.push_back(coefficients(s));
    times.push_back(s.t);
  }
  return coefs;
}

}  // namespace

std::vector<double> CorrectionFields::Q_mean() const {
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j) out[i] += mu_weight[j] * Q(i, j);
  return out;
}

std::vector<double> CorrectionFields::P_mean() const {
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j) out[i] += mu_weight[j] * P(i, j);
  return out;
}

std::pair<double, double> evaluate_QP(const flow::FlowTrajectory& traj, const std::vector<LevelSetSlice>& slices,
                                      double r, double mu, const LevelSetConfig& cfg) {
  if (slices.empty()) fail(ErrorKind::DomainError, "no level-set slices");
  if (!(r > 0.0) || std::abs(mu) > 1.0) fail(ErrorKind::DomainError, "evaluation point out of range");
  std::vector<double> times;
  const auto coefs = all_coefficients(slices, times);
  const PointJets pj = point_jets(*mode(slices[0].phi).basis, r);
  const auto pi = integrate_point(coefs, times, pj, mu, radial_exit_time(traj, r), cfg);
  return {pi.Q, pi.P};
}

CorrectionFields accumulate_QP(const flow::FlowTrajectory& traj, const std::vector<LevelSetSlice>& slices,
                               const LevelSetConfig& cfg) {
  if (slices.empty()) fail(ErrorKind::DomainError, "no level-set slices");
  const ConformalData& data = traj.data();
  const auto& basis = *mode(slices[0].phi).basis;
  std::vector<double> times;
  const auto coefs = all_coefficients(slices, times);

  CorrectionFields out;
  const RadialGrid grid =
      radial_grid(inner_radius(data, slices[0].R), cfg.r_far_factor * mass_scale(data), cfg.points_per_decade);
  std::tie(out.mu, out.mu_weight) = gauss_legendre_unit(cfg.mu_nodes);
  const std::size_t nr = grid.r.size(), nm = out.mu.size();
  out.r = grid.r;
  out.Q = Eigen::MatrixXd::Zero(nr, nm);
  out.P = Eigen::MatrixXd::Zero(nr, nm);
  out.exit_time.assign(nr, 0.0);
  out.volume_weight.assign(nr, 0.0);
  std::vector<double> curvature(nr), tq(nr, 0.0), tp(nr, 0.0);
  std::vector<int> guards(nr, 0);

  detail::parallel_for(nr, [&](std::size_t i) {
    const double r = grid.r[i];
    const PointJets pj = point_jets(basis, r);
    const double te = radial_exit_time(traj, r);
    out.exit_time[i] = std::min(te, traj.final_time());
    out.volume_weight[i] = grid.dy[i] * r * r * r * std::pow(pj.U.v, 6);
    curvature[i] = radial_curvature(pj.U, r);
    for (std::size_t j = 0; j < nm; ++j) {
      const auto pi = integrate_point(coefs, times, pj, out.mu[j], te, cfg);
      out.Q(i, j) = pi.Q;
      out.P(i, j) = pi.P;
      tq[i] += out.mu_weight[j] * pi.tail_Q;
      tp[i] += out.mu_weight[j] * pi.tail_P;
      guards[i] += pi.guards;
    }
  });

  const double four_pi = 4.0 * std::numbers::pi;
  const auto qm = out.Q_mean(), pm = out.P_mean();
  for (std::size_t i = 0; i < nr; ++i) {
    out.integral_RQ += four_pi * out.volume_weight[i] * curvature[i] * qm[i];
    out.integral_P += four_pi * out.volume_weight[i] * pm[i];
    out.tail_RQ += four_pi * out.volume_weight[i] * curvature[i] * tq[i];
    out.tail_P += four_pi * out.volume_weight[i] * tp[i];
    out.guard_events += guards[i];
  }
  return out;
}

double mass_lower_bound_levelset(const ConformalData& data, const std::function<Jet(double)>& H, double r_inner,
                                 const LevelSetConfig& cfg) {
  if (!data.is_radial()) fail(ErrorKind::DomainError, "level-set mass bound needs radial data");
  const RadialGrid grid =
      radial_grid(inner_radius(data, r_inner), cfg.r_far_factor * mass_scale(data), cfg.points_per_decade);
  const auto [mu, wmu] = gauss_legendre_unit(cfg.mu_nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.r.size(); ++i) {
    const double r = grid.r[i];
    const Jet U = data.radial(r);
    const Jet h = H(r);
    const double R = radial_curvature(U, r);
    double ang = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      const Term t = term(h, U, U, r, mu[j], cfg.guard);
      ang += wmu[j] * (t.p + R * t.grad);
    }
    total += 4.0 * std::numbers::pi * grid.dy[i] * r * r * r * std::pow(U.v, 6) * ang;
  }
  return total / (16.0 * std::numbers::pi);
}

MassReport verify_inequality_levelset(const ConformalData& data, const CorrectionFields& fields,
                                      const flow::FlowTrajectory& traj) {
  MassReport rep;
  rep.method = "levelset";
  rep.mass = geometry::adm_mass(data).mass;
  rep.area = traj.states.empty() ? 0.0 : traj.states.front().area;
  rep.integral_RQ = fields.integral_RQ;
  rep.integral_P = fields.integral_P;
  rep.tail_estimate = (fields.tail_RQ + fields.tail_P) / (16.0 * std::numbers::pi);
  rep.guard_events = fields.guard_events;
  rep.finalize();
  if (traj.states.empty() || traj.states.front().sigma.is_empty()) rep.note = "empty horizon; area term is zero";
  rep.provenance["flow_dt"] = std::to_string(traj.config().dt);
  rep.provenance["t_max"] = std::to_string(traj.final_time());
  rep.provenance["radial_nodes"] = std::to_string(fields.r.size());
  rep.provenance["angular_nodes"] = std::to_string(fields.mu.size());
  return rep;
}

}  // namespace penrose::levelset
