#include "penrose/spinor.hpp"

#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "penrose/errors.hpp"
#include "penrose/geometry.hpp"
#include "radial_quadrature.hpp"

namespace penrose::spinor {

namespace {

const CliffordFrame& frame() {
  static const CliffordFrame f;
  return f;
}

constexpr std::complex<double> I(0.0, 1.0);

// Gauss-Legendre on [-1, 1] with weights summing to 1.
std::pair<std::vector<double>, std::vector<double>> mu_rule(int n) {
  auto [x, w] = levelset::gauss_legendre_unit(n);
  for (auto& v : x) v = 2.0 * v - 1.0;
  return {x, w};
}

Eigen::Vector3d meridian_point(double r, double mu) {
  return r * Eigen::Vector3d(std::sqrt(std::max(0.0, 1.0 - mu * mu)), 0.0, mu);
}

}  // namespace

double covariant_gradient_norm2(const CliffordFrame& fr, const SpinorJet& psi, const Eigen::Vector3d& dlogU, double U) {
  const Mat2 a = fr.vector(dlogU);
  double s = 0.0;
  for (int j = 0; j < 3; ++j) s += (psi.d[j] - (dlogU[j] * psi.v + fr.e(j) * (a * psi.v))).squaredNorm();
  return s / std::pow(U, 4);
}

SpinorField conformal_constant_spinor(const ConformalData& data, const Spinor& psi0) {
  return [data, psi0](const Eigen::Vector3d& x) {
    const double rho = std::hypot(x[0], x[1]);
    const double U = data.factor(rho, x[2]);
    const Eigen::Vector2d g2 = data.gradient(rho, x[2]);
    const Eigen::Vector3d g = rho > 0.0 ? Eigen::Vector3d(g2[0] * x[0] / rho, g2[0] * x[1] / rho, g2[1])
                                        : Eigen::Vector3d(0.0, 0.0, g2[1]);
    SpinorJet out;
    out.v = psi0 / (U * U);
    for (int j = 0; j < 3; ++j) out.d[j] = (-2.0 * g[j] / (U * U * U)) * psi0;
    return out;
  };
}

double witten_mass(const ConformalData& data, const SpinorField& psi, double r_inner, const SpinorConfig& cfg) {
  if (!data.is_radial()) fail(ErrorKind::DomainError, "witten_mass quadrature expects radial data");
  const auto grid = detail::radial_grid(detail::inner_radius(data, r_inner), cfg.r_far_factor * detail::mass_scale(data),
                                        cfg.points_per_decade);
  const auto [mu, wmu] = mu_rule(cfg.mu_nodes);
  const int na = std::max(1, cfg.azimuth_nodes);
  std::vector<double> shell(grid.r.size(), 0.0);
  detail::parallel_for(grid.r.size(), [&](std::size_t i) {
    const double r = grid.r[i];
    const Jet U = data.radial(r);
    const double R = detail::radial_curvature(U, r);
    double ang = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j)
      for (int k = 0; k < na; ++k) {
        const double az = 2.0 * std::numbers::pi * k / na, st = std::sqrt(std::max(0.0, 1.0 - mu[j] * mu[j]));
        const Eigen::Vector3d xh(st * std::cos(az), st * std::sin(az), mu[j]);
        const SpinorJet s = psi(r * xh);
        const double grad2 = covariant_gradient_norm2(frame(), s, (U.d1 / U.v) * xh, U.v);
        ang += wmu[j] / na * (4.0 * grad2 + R * s.v.squaredNorm());
      }
    shell[i] = 4.0 * std::numbers::pi * grid.dy[i] * r * r * r * std::pow(U.v, 6) * ang;
  });
  double total = 0.0;
  for (double v : shell) total += v;
  return total / (16.0 * std::numbers::pi);
}

const ConformalData& SpinorSlice::data() const { return phi.radial->basis->data(); }

SpinorJet SpinorSlice::p(const Eigen::Vector3d& x) const {
  const double r = x.norm();
  const Jet U = data().radial(r);
  const double s = a * a * std::exp(-2.0 * t) / (U.v * U.v);
  const double ds = -2.0 * s * U.d1 / U.v;
  const Eigen::Vector3d xh = x / r;
  const Eigen::Vector3d G = x / (r * r * r);
  const Spinor core = psi0 + R * R * (frame().i_nu(G) * psi0);
  SpinorJet out;
  out.v = s * core;
  for (int j = 0; j < 3; ++j) {
    const Eigen::Vector3d dG = Eigen::Vector3d::Unit(j) / (r * r * r) - 3.0 * x[j] * x / std::pow(r, 5);
    out.d[j] = ds * xh[j] * core + s * R * R * (frame().i_nu(dG) * psi0);
  }
  return out;
}

SpinorJet SpinorSlice::q(const Eigen::Vector3d& x) const {
  const SpinorJet plus = p(x);
  const double r = x.norm();
  const Jet U = data().radial(r);
  const double s = a * a * std::exp(-2.0 * t) / (U.v * U.v);
  const double ds = -2.0 * s * U.d1 / U.v;
  SpinorJet out;
  // q = 2 s psi0 - p
  out.v = 2.0 * s * psi0 - plus.v;
  for (int j = 0; j < 3; ++j) out.d[j] = 2.0 * ds * (x[j] / r) * psi0 - plus.d[j];
  return out;
}

SpinorJet SpinorSlice::psi(int l, const Eigen::Vector3d& x) const {
  const SpinorJet pp = p(x), qq = q(x);
  const double sign = l == 0 ? 1.0 : -1.0;
  SpinorJet out;
  out.v = 0.5 * (pp.v + sign * qq.v);
  for (int j = 0; j < 3; ++j) out.d[j] = 0.5 * (pp.d[j] + sign * qq.d[j]);
  return out;
}

Jet SpinorSlice::weight(int l, double r) const {
  const Jet ph = phi.radial->profile(r);
  if (l == 0) return ph;
  const Jet u = B == 0.0 ? Jet::constant(A) : A + B * phi.radial->basis->K(r);
  return u - ph;
}

SpinorSlice solve_boundary_spinors(const flow::FlowTrajectory& traj, std::size_t k, const SpinorConfig& cfg) {
  if (!traj.radial()) fail(ErrorKind::DomainError, "spinor slices need radial data");
  if (k >= traj.states.size()) fail(ErrorKind::DomainError, "slice index out of range");
  const flow::FlowState& st = traj.states[k];
  SpinorSlice s;
  s.t = st.t;
  s.R = st.sigma.kind == horizon::SurfaceKind::Sphere ? st.sigma.radius : 0.0;
  s.A = st.A;
  s.B = st.B;
  s.a = traj.data().asymptotics().a;
  s.psi0 = cfg.psi0;
  if (std::abs(s.psi0.norm() - 1.0) > 1e-12) fail(ErrorKind::DomainError, "asymptotic spinor must have unit length");
  s.phi = levelset::solve_phi(traj, k);
  if (s.R > 0.0) {
    for (int n = 0; n < 16; ++n) {
      const double th = std::numbers::pi * (n + 0.5) / 16.0, az = 0.7 * n;
      const Eigen::Vector3d nu(std::sin(th) * std::cos(az), std::sin(th) * std::sin(az), std::cos(th));
      const Mat2 inu = frame().i_nu(nu);
      if ((inu * inu - Mat2::Identity()).norm() > 1e-12)
        fail(ErrorKind::BoundaryProjectionInconsistent, "boundary operator does not square to the identity");
      const Spinor pv = s.p(s.R * nu).v, qv = s.q(s.R * nu).v;
      const double scale = std::max(pv.norm() + qv.norm(), 1e-300);
      s.boundary_residual =
          std::max(s.boundary_residual, ((inu * pv - pv).norm() + (inu * qv + qv).norm()) / scale);
    }
  }
  return s;
}

std::vector<SpinorSlice> solve_spinor_slices(const flow::FlowTrajectory& traj, const SpinorConfig& cfg) {
  std::vector<SpinorSlice> out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) out.push_back(solve_boundary_spinors(traj, k, cfg));
  return out;
}

namespace {

struct SliceLite {
  double t = 0.0, R = 0.0, A = 1.0, B = 0.0, a = 1.0, phi_a = 0.0, phi_b = 0.0;
  Spinor psi0;
};

SliceLite lite(const SpinorSlice& s) {
  return {s.t, s.R, s.A, s.B, s.a, s.phi.radial->alpha, s.phi.radial->beta, s.psi0};
}

struct PointJets {
  double r = 0.0;
  Jet U, K;
};

// One l-term: chi = f(r) M(x) psi0 with M = 1 (l = 0) or sigma . xhat (l = 1);
// returns sum_j |d_j chi - (d_j omega + e_j . grad omega) chi|^2.
double connection_defect(const Jet& f, const Jet& omega_log, const Eigen::Vector3d& xh, double r, bool odd,
                         const Spinor& psi0) {
  const CliffordFrame& fr = frame();
  const Mat2 S = odd ? fr.i_nu(xh) : Mat2::Identity();
  const Mat2 V = fr.vector(xh);
  const Spinor chi = f.v * (S * psi0);
  const double w = omega_log.d1;
  double sum = 0.0;
  for (int j = 0; j < 3; ++j) {
    Spinor d = f.d1 * xh[j] * (S * psi0);
    if (odd) d += f.v * ((I * fr.e(j) - xh[j] * S) * psi0) / r;
    d -= w * (xh[j] * chi + fr.e(j) * (V * chi));
    sum += d.squaredNorm();
  }
  return sum;
}

SpinorDensity density_lite(const SliceLite& sl, const PointJets& pj, double mu, const SpinorConfig& cfg) {
  SpinorDensity out;
  const double r = pj.r;
  const Eigen::Vector3d xh = meridian_point(1.0, mu);
  const Jet& U = pj.U;
  const Jet s = (sl.a * sl.a * std::exp(-2.0 * sl.t)) * pow(U, -2.0);
  const double u4 = std::pow(U.v, 4);
  const double n0 = sl.psi0.squaredNorm();
  const Jet phi0 = sl.phi_b == 0.0 ? Jet::constant(sl.phi_a) : sl.phi_a + sl.phi_b * pj.K;
  const Jet f0 = s / (phi0 * phi0);
  out.q0 = 2.0 * s.v * s.v / (phi0.v * phi0.v) * n0;
  out.p0 = 8.0 * phi0.v * phi0.v / u4 * connection_defect(f0, log(U * phi0), xh, r, false, sl.psi0);
  if (sl.R == 0.0) return out;
  const Jet u = sl.B == 0.0 ? Jet::constant(sl.A) : sl.A + sl.B * pj.K;
  const Jet phi1 = u - phi0;
  if (!(phi1.v > cfg.guard * u.v)) {
    ++out.guards;
    return out;
  }
  const Jet s1 = (sl.R * sl.R) * s * pow(Jet::variable(r), -2.0);
  const Jet f1 = s1 / (phi1 * phi1);
  out.q1 = 2.0 * s1.v * s1.v / (phi1.v * phi1.v) * n0;
  out.p1 = 8.0 * phi1.v * phi1.v / u4 * connection_defect(f1, log(U * phi1), xh, r, true, sl.psi0);
  return out;
}

PointJets point_jets(const ConformalData& data, const elliptic::RadialBasis& basis, double r) {
  return {r, data.radial(r), basis.K(r)};
}

}  // namespace

SpinorDensity spinor_density(const SpinorSlice& s, double r, double mu, const SpinorConfig& cfg) {
  return density_lite(lite(s), point_jets(s.data(), *s.phi.radial->basis, r), mu, cfg);
}

namespace {

detail::PointIntegral integrate_point(const std::vector<SliceLite>& sl, const std::vector<double>& times,
                                      const PointJets& pj, double mu, double t_exit, const SpinorConfig& cfg) {
  return detail::integrate_in_time(times, t_exit, [&](std::size_t k) {
    const SpinorDensity d = density_lite(sl[k], pj, mu, cfg);
    return detail::TimeSample{d.q0 + d.q1, d.p0 + d.p1, d.guards};
  });
}

std::vector<SliceLite> lites(const std::vector<SpinorSlice>& slices, std::vector<double>& times) {
  if (slices.empty()) fail(ErrorKind::DomainError, "no spinor slices");
  std::vector<SliceLite> out;
  times.clear();
  for (const auto& s : slices) {
    out.push_back(lite(s));
    times.push_back(s.t);
  }
  return out;
}

}  // namespace

std::pair<double, double> evaluate_QP_spinor(const flow::FlowTrajectory& traj, const std::vector<SpinorSlice>& slices,
                                             double r, double mu, const SpinorConfig& cfg) {
  if (!(r > 0.0) || std::abs(mu) > 1.0) fail(ErrorKind::DomainError, "evaluation point out of range");
  std::vector<double> times;
  const auto sl = lites(slices, times);
  const auto pj = point_jets(traj.data(), *slices[0].phi.radial->basis, r);
  const auto pi = integrate_point(sl, times, pj, mu, detail::radial_exit_time(traj, r), cfg);
  return {pi.Q, pi.P};
}

levelset::CorrectionFields accumulate_QP_spinor(const flow::FlowTrajectory& traj,
                                                const std::vector<SpinorSlice>& slices, const SpinorConfig& cfg) {
  std::vector<double> times;
  const auto sl = lites(slices, times);
  const ConformalData& data = traj.data();
  const auto& basis = *slices[0].phi.radial->basis;
  const auto grid = detail::radial_grid(detail::inner_radius(data, slices[0].R),
                                        cfg.r_far_factor * detail::mass_scale(data), cfg.points_per_decade);
  levelset::CorrectionFields out;
  std::tie(out.mu, out.mu_weight) = mu_rule(cfg.mu_nodes);
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
    const PointJets pj = point_jets(data, basis, r);
    const double te = detail::radial_exit_time(traj, r);
    out.exit_time[i] = std::min(te, traj.final_time());
    out.volume_weight[i] = grid.dy[i] * r * r * r * std::pow(pj.U.v, 6);
    curvature[i] = detail::radial_curvature(pj.U, r);
    for (std::size_t j = 0; j < nm; ++j) {
      const auto pi = integrate_point(sl, times, pj, out.mu[j], te, cfg);
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

MassReport verify_equality_spinor(const ConformalData& data, const levelset::CorrectionFields& fields,
                                  const flow::FlowTrajectory& traj) {
  MassReport rep;
  rep.method = "spinor";
  rep.mass = geometry::adm_mass(data).mass;
  rep.area = traj.states.empty() ? 0.0 : traj.states.front().area;
  rep.integral_RQ = fields.integral_RQ;
  rep.integral_P = fields.integral_P;
  rep.tail_estimate = (fields.tail_RQ + fields.tail_P) / (16.0 * std::numbers::pi);
  rep.guard_events = fields.guard_events;
  rep.finalize();
  if (rep.mass == 0.0 && rep.area == 0.0) {
    rep.status = "degenerate";
    rep.note = "flat data: both sides vanish";
  } else if (traj.states.empty() || traj.states.front().sigma.is_empty()) {
    rep.note = "empty horizon; area term is zero";
  }
  rep.provenance["flow_dt"] = std::to_string(traj.config().dt);
  rep.provenance["t_max"] = std::to_string(traj.final_time());
  rep.provenance["radial_nodes"] = std::to_string(fields.r.size());
  rep.provenance["angular_nodes"] = std::to_string(fields.mu.size());
  return rep;
}

}  // namespace penrose::spinor
