#include <cmath>

#include "parallel.hpp"
#include "penrose/errors.hpp"
#include "penrose/levelset.hpp"
#include "penrose/polar_solver.hpp"

namespace penrose::levelset {

using elliptic::AsymptoteSpec;
using elliptic::BoundarySpec;

std::vector<double> evaluate_Q_grid(const flow::FlowTrajectory& traj, const std::vector<Eigen::Vector2d>& points,
                                    const GridConfig& grid, const LevelSetConfig& cfg) {
  if (!traj.radial()) fail(ErrorKind::DomainError, "grid level-set path expects spherical horizons");
  const ConformalData& data = traj.data();
  const std::size_t np = points.size();
  std::vector<double> te(np);
  double t_need = 0.0;
  for (std::size_t j = 0; j < np; ++j) {
    te[j] = traj.exit_time(points[j].x(), points[j].y());
    t_need = std::max(t_need, te[j]);
  }
  std::size_t n_slices = 0;
  while (n_slices < traj.states.size() && (n_slices == 0 || traj.states[n_slices - 1].t < t_need)) ++n_slices;

  elliptic::PolarGridOptions opt;
  opt.n_s = grid.n_s;
  opt.n_theta = grid.n_theta;
  opt.method = elliptic::PolarMethod::SparseCholesky;

  // integrand[k][j] = |grad U_1|_g + |grad U_2|_g at slice k, point j.
  std::vector<std::vector<double>> integrand(n_slices, std::vector<double>(np, 0.0));
  detail::parallel_for(n_slices, [&](std::size_t k) {
    const flow::FlowState& s = traj.states[k];
    if (s.sigma.kind != horizon::SurfaceKind::Sphere)
      fail(ErrorKind::DomainError, "grid level-set path needs a spherical horizon at every slice");
    const double R = s.sigma.radius;
    const Jet uR = traj.u_exterior(k, R);
    const auto lin = AsymptoteSpec::linear(std::exp(-3.0 * s.t));
    const auto phi = elliptic::solve_exterior_harmonic_grid(
        data, BoundarySpec::dirichlet(s.sigma, 0.5 * uR.v), AsymptoteSpec::constant(std::exp(-s.t)), opt);
    const auto p = elliptic::solve_exterior_harmonic_grid(data, BoundarySpec::robin(s.sigma, uR.d1 / uR.v), lin, opt);
    const auto q = elliptic::solve_exterior_harmonic_grid(data, BoundarySpec::dirichlet(s.sigma, 0.0), lin, opt);
    for (std::size_t j = 0; j < np; ++j) {
      const double rho = points[j].x(), z = points[j].y();
      const double r = std::hypot(rho, z);
      if (r < R) continue;
      const Jet u = traj.u_exterior(k, r);
      const Eigen::Vector2d du = u.d1 * Eigen::Vector2d(rho / r, z / r);
      const double fphi = phi.value(rho, z), fp = p.value(rho, z), fq = q.value(rho, z);
      const Eigen::Vector2d gphi = phi.gradient(rho, z), gp = p.gradient(rho, z), gq = q.gradient(rho, z);
      const Eigen::Vector2d g1 = (gp + gq) / fphi - (fp + fq) * gphi / (fphi * fphi);
      double total = g1.norm();
      const double w = u.v - fphi;
      if (w > cfg.guard * u.v) {
        const Eigen::Vector2d g2 = (gp - gq) / w - (fp - fq) * (du - gphi) / (w * w);
        total += g2.norm();
      }
      const double U = data.factor(rho, z);
      integrand[k][j] = total / (U * U);
    }
  });

  std::vector<double> Q(np, 0.0);
  for (std::size_t j = 0; j < np; ++j) {
    for (std::size_t k = 1; k < n_slices; ++k) {
      const double t0 = traj.states[k - 1].t, t1 = traj.states[k].t;
      if (t0 >= te[j]) break;
      if (t1 <= te[j]) {
        Q[j] += 0.5 * (t1 - t0) * (integrand[k - 1][j] + integrand[k][j]);
        continue;
      }
      // The point is inside Sigma(t1); extrapolate from the two previous slices.
      const double tau = te[j] - t0;
      const double slope = k >= 2 ? (integrand[k - 1][j] - integrand[k - 2][j]) /
                                        (t0 - traj.states[k - 2].t)
                                  : 0.0;
      Q[j] += tau * (integrand[k - 1][j] + 0.5 * slope * tau);
    }
  }
  return Q;
}

}  // namespace penrose::levelset
