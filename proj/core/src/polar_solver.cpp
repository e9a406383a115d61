#include "penrose/polar_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "penrose/errors.hpp"

namespace penrose::elliptic {

namespace {

constexpr double kPi = std::numbers::pi;

// Lagrange weights and derivative weights for nodes 0..3 at position t.
void lagrange4(double t, double w[4], double dw[4]) {
  const double n[4] = {0.0, 1.0, 2.0, 3.0};
  for (int k = 0; k < 4; ++k) {
    double num = 1.0, den = 1.0, d = 0.0;
    for (int m = 0; m < 4; ++m) {
      if (m == k) continue;
      den *= n[k] - n[m];
      num *= t - n[m];
      double p = 1.0;
      for (int q = 0; q < 4; ++q)
        if (q != k && q != m) p *= t - n[q];
      d += p;
    }
    w[k] = num / den;
    dw[k] = d / den;
  }
}

int mirror(int j, int n) {
  if (j < 0) return -j - 1;
  if (j >= n) return 2 * n - j - 1;
  return j;
}

}  // namespace

PolarSolution::PolarSolution(const ConformalData& data, double R, int n_s, int n_theta, AsymptoteSpec asym)
    : data_(data), R_(R), n_s_(n_s), n_theta_(n_theta), asym_(asym),
      w_(static_cast<std::size_t>(n_s + 1) * n_theta, 0.0) {}

double PolarSolution::theta(int j) const noexcept { return (j + 0.5) * kPi / n_theta_; }

double PolarSolution::base_value(double rho, double z) const {
  if (asym_.kind == AsymptoteKind::Constant) return asym_.c;
  return asym_.c * data_.asymptotics().a * z / data_.factor(rho, z);
}

Eigen::Vector2d PolarSolution::base_gradient(double rho, double z) const {
  if (asym_.kind == AsymptoteKind::Constant) return Eigen::Vector2d::Zero();
  const double U = data_.factor(rho, z);
  const Eigen::Vector2d dU = data_.gradient(rho, z);
  return asym_.c * data_.asymptotics().a * (Eigen::Vector2d(0.0, 1.0 / U) - z * dU / (U * U));
}

Eigen::Vector3d PolarSolution::interpolate(double s, double th) const {
  s = std::clamp(s, 0.0, 1.0);
  const double ps = s * n_s_;
  const int i0 = std::clamp(static_cast<int>(std::floor(ps)) - 1, 0, n_s_ - 3);
  const double dth = kPi / n_theta_;
  const double pt = th / dth - 0.5;
  const int j0 = static_cast<int>(std::floor(pt)) - 1;
  double ws[4], dws[4], wt[4], dwt[4];
  lagrange4(ps - i0, ws, dws);
  lagrange4(pt - j0, wt, dwt);
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double v = w(i0 + a, mirror(j0 + b, n_theta_));
      out[0] += ws[a] * wt[b] * v;
      out[1] += dws[a] * wt[b] * v * n_s_;
      out[2] += ws[a] * dwt[b] * v / dth;
    }
  return out;
}

double PolarSolution::value(double rho, double z) const {
  const double r = std::hypot(rho, z);
  return base_value(rho, z) + interpolate(R_ / r, std::atan2(rho, z))[0];
}

Eigen::Vector2d PolarSolution::gradient(double rho, double z) const {
  const double r = std::hypot(rho, z);
  const double s = R_ / r, th = std::atan2(rho, z);
  const Eigen::Vector3d q = interpolate(s, th);
  const double wr = -(s * s / R_) * q[1];
  const double wt = q[2] / r;
  const Eigen::Vector2d rhat(std::sin(th), std::cos(th)), that(std::cos(th), -std::sin(th));
  return base_gradient(rho, z) + wr * rhat + wt * that;
}

HarmonicField solve_exterior_harmonic_grid(const ConformalData& data, const BoundarySpec& bc,
                                           const AsymptoteSpec& asym, const PolarGridOptions& opt) {
  if (bc.surface.kind != horizon::SurfaceKind::Sphere || bc.kind == BoundaryKind::None)
    fail(ErrorKind::DomainError, "grid path needs a Dirichlet or Robin condition on a sphere");
  if (opt.n_s < 8 || opt.n_theta < 4) fail(ErrorKind::DomainError, "polar grid too coarse");
  const double R = bc.surface.radius;
  const int ns = opt.n_s, nt = opt.n_theta;
  const bool robin = bc.kind == BoundaryKind::Robin;
  const int last = robin ? ns : ns - 1;
  const double ds = 1.0 / ns, dth = kPi / nt;
  const double a = data.asymptotics().a;

  auto sol = std::make_shared<PolarSolution>(data, R, ns, nt, asym);
  auto U2 = [&](double s, double th) {
    if (s <= 0.0) return a * a;
    const double r = R / s;
    const double u = data.factor(r * std::sin(th), r * std::cos(th));
    return u * u;
  };
  auto source = [&](double s, double th) {
    if (asym.kind == AsymptoteKind::Constant || s <= 0.0) return 0.0;
    const double r = R / s;
    const double z = r * std::cos(th);
    return -(R * R / std::pow(s, 4)) * std::sin(th) * asym.c * a * z * data.flat_laplacian(r * std::sin(th), z);
  };
  auto boundary_value = [&](double th) {
    const double V = bc.value_profile ? bc.value_profile(th)
                     : asym.kind == AsymptoteKind::Linear ? bc.value * std::cos(th) : bc.value;
    return V - sol->base_value(R * std::sin(th), R * std::cos(th));
  };
  if (!robin)
    for (int j = 0; j < nt; ++j) sol->w(ns, j) = boundary_value(sol->theta(j));

  const int n = last * nt;
  auto idx = [&](int i, int j) { return (i - 1) * nt + j; };
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  for (int i = 1; i <= last; ++i) {
    const double s = i * ds;
    const bool edge = robin && i == ns;
    const double vol = edge ? 0.5 * ds : ds;
    for (int j = 0; j < nt; ++j) {
      const double th = sol->theta(j);
      const double sn = std::sin(th);
      const int row = idx(i, j);
      double diag = 0.0;
      // radial fluxes
      const double cm = sn * U2(s - 0.5 * ds, th) / ds;
      diag += cm;
      if (i - 1 >= 1) trip.emplace_back(row, idx(i - 1, j), -cm);
      if (!edge) {
        const double cp = sn * U2(s + 0.5 * ds, th) / ds;
        diag += cp;
        if (i + 1 <= last) trip.emplace_back(row, idx(i + 1, j), -cp);
        else rhs[row] += cp * sol->w(ns, j);
      }
      // angular fluxes
      for (int dj : {-1, 1}) {
        const double thf = th + 0.5 * dj * dth;
        const double sf = std::sin(thf);
        if (j + dj < 0 || j + dj >= nt || sf <= 0.0) continue;
        const double c = vol / (s * s) * sf * U2(s, thf) / (dth * dth);
        diag += c;
        trip.emplace_back(row, idx(i, j + dj), -c);
      }
      rhs[row] += vol * source(s, th);
      if (edge) {
        const double kappa = bc.coefficient_profile ? bc.coefficient_profile(th) : bc.coefficient;
        const double ub = U2(1.0, th);
        const double rho = R * sn, z = R * std::cos(th);
        const double f0 = sol->base_value(rho, z);
        const double dr_f0 = sol->base_gradient(rho, z).dot(Eigen::Vector2d(sn, std::cos(th)));
        diag += sn * ub * R * kappa;
        rhs[row] += -sn * ub * R * (kappa * f0 - dr_f0);
      }
      trip.emplace_back(row, row, diag);
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd x;
  SolveStats stats;
  bool ok = false;
  if (opt.method == PolarMethod::ConjugateGradient) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(opt.tolerance);
    cg.setMaxIterations(opt.max_iterations);
    cg.compute(A);
    if (cg.info() == Eigen::Success) {
      x = cg.solve(rhs);
      stats.iterations = static_cast<int>(cg.iterations());
      stats.history.push_back(cg.error());
      ok = cg.info() == Eigen::Success;
    }
  } else {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() == Eigen::Success) {
      x = ldlt.solve(rhs);
      stats.iterations = 1;
      ok = ldlt.info() == Eigen::Success;
    }
  }
  if (!ok) {
    // Robin data with an inward-growing factor can make A indefinite.
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverDiverged("polar solve failed to factorise", stats.history);
    x = lu.solve(rhs);
    stats.iterations += 1;
  }
  const double bnorm = std::max(rhs.norm(), 1e-300);
  stats.residual = (A * x - rhs).norm() / bnorm;
  stats.history.push_back(stats.residual);
  if (!(stats.residual <= std::max(opt.tolerance * 100.0, 1e-8)))
    throw SolverDiverged("polar solve residual " + std::to_string(stats.residual), stats.history);

  for (int i = 1; i <= last; ++i)
    for (int j = 0; j < nt; ++j) sol->w(i, j) = x[idx(i, j)];

  HarmonicField f;
  f.boundary = bc;
  f.asymptote = asym;
  f.polar = sol;
  f.stats = stats;
  if (robin) {
    double worst = 0.0;
    for (int j = 0; j < nt; ++j) {
      const double th = sol->theta(j);
      const double kappa = bc.coefficient_profile ? bc.coefficient_profile(th) : bc.coefficient;
      const double rho = R * std::sin(th), z = R * std::cos(th);
      const double fr = f.gradient(rho, z).dot(Eigen::Vector2d(std::sin(th), std::cos(th)));
      worst = std::max(worst, std::abs(fr - kappa * f.value(rho, z)));
    }
    f.stats.boundary_residual = worst;
  }
  return f;
}

}  // namespace penrose::elliptic
