#include "penrose/fields.hpp"

#include "penrose/errors.hpp"

namespace penrose {

namespace {

// Strided view of one grid line.
struct Line {
  const Eigen::VectorXd& v;
  std::size_t start, stride;
  int n;
  double operator[](int k) const { return v[static_cast<Eigen::Index>(start + stride * static_cast<std::size_t>(k))]; }
};

double d1(const Line& f, int k, double h, bool mirror_low) {
  const int n = f.n;
  if (k > 0 && k < n - 1) return (f[k + 1] - f[k - 1]) / (2.0 * h);
  if (k == 0) return mirror_low ? (f[1] - f[0]) / (2.0 * h) : (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
}

double d2(const Line& f, int k, double h, bool mirror_low) {
  const int n = f.n;
  const double h2 = h * h;
  if (k > 0 && k < n - 1) return (f[k + 1] - 2.0 * f[k] + f[k - 1]) / h2;
  if (k == 0) return mirror_low ? (f[1] - f[0]) / h2 : (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  return (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
}

Line row(const ScalarField& f, int j) { return {f.values, f.chart.index(0, j), 1, f.chart.n1()}; }
Line col(const Eigen::VectorXd& v, const Chart& c, int i) {
  return {v, c.index(i, 0), static_cast<std::size_t>(c.n1()), c.n2()};
}

void require_grid(const Chart& c) {
  if (c.n1() < 4 || (c.kind() == ChartKind::Axisymmetric && c.n2() < 4))
    fail(ErrorKind::DomainError, "finite differences need at least 4 nodes per direction");
}

}  // namespace

Eigen::Vector3d node_point(const Chart& chart, int i, int j) {
  if (chart.kind() == ChartKind::Radial) return {0.0, 0.0, chart.r(i)};
  return {chart.rho(i), 0.0, chart.z(j)};
}

ScalarField::ScalarField(Chart c, MetricTag m)
    : chart(std::move(c)), metric(m), values(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(chart.size()))) {}

ScalarField ScalarField::sample(const Chart& c, const std::function<double(const Eigen::Vector3d&)>& f, MetricTag m) {
  ScalarField out(c, m);
  for (int j = 0; j < c.n2(); ++j)
    for (int i = 0; i < c.n1(); ++i) out(i, j) = f(node_point(c, i, j));
  return out;
}

VectorField::VectorField(Chart c, MetricTag m) : chart(std::move(c)), metric(m) {
  for (auto& v : comp) v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(chart.size()));
}

Eigen::Vector3d VectorField::at(int i, int j) const {
  const auto k = static_cast<Eigen::Index>(chart.index(i, j));
  return {comp[0][k], comp[1][k], comp[2][k]};
}

SymTensorField::SymTensorField(Chart c, MetricTag m) : chart(std::move(c)), metric(m) {
  for (auto& v : comp) v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(chart.size()));
}

Eigen::Matrix3d SymTensorField::at(int i, int j) const {
  const auto k = static_cast<Eigen::Index>(chart.index(i, j));
  Eigen::Matrix3d t;
  t << comp[0][k], comp[1][k], comp[2][k],
       comp[1][k], comp[3][k], comp[4][k],
       comp[2][k], comp[4][k], comp[5][k];
  return t;
}

void SymTensorField::set(int i, int j, const Eigen::Matrix3d& t) {
  const auto k = static_cast<Eigen::Index>(chart.index(i, j));
  comp[0][k] = t(0, 0);
  comp[1][k] = 0.5 * (t(0, 1) + t(1, 0));
  comp[2][k] = 0.5 * (t(0, 2) + t(2, 0));
  comp[3][k] = t(1, 1);
  comp[4][k] = 0.5 * (t(1, 2) + t(2, 1));
  comp[5][k] = t(2, 2);
}

VectorField gradient(const ScalarField& f) {
  const Chart& c = f.chart;
  require_grid(c);
  VectorField g(c, f.metric);
  if (c.kind() == ChartKind::Radial) {
    const Line l = row(f, 0);
    for (int i = 0; i < c.n1(); ++i) g.comp[2][i] = d1(l, i, c.log_spacing(), false) / c.r(i);
    return g;
  }
  for (int j = 0; j < c.n2(); ++j) {
    const Line l = row(f, j);
    for (int i = 0; i < c.n1(); ++i) g.comp[0][static_cast<Eigen::Index>(c.index(i, j))] = d1(l, i, c.drho(), true);
  }
  for (int i = 0; i < c.n1(); ++i) {
    const Line l = col(f.values, c, i);
    for (int j = 0; j < c.n2(); ++j) g.comp[2][static_cast<Eigen::Index>(c.index(i, j))] = d1(l, j, c.dz(), false);
  }
  return g;
}

SymTensorField hessian(const ScalarField& f) {
  const Chart& c = f.chart;
  require_grid(c);
  SymTensorField H(c, f.metric);
  if (c.kind() == ChartKind::Radial) {
    const Line l = row(f, 0);
    const double h = c.log_spacing();
    for (int i = 0; i < c.n1(); ++i) {
      const double r = c.r(i);
      const double fy = d1(l, i, h, false), fyy = d2(l, i, h, false);
      const double fr = fy / r, frr = (fyy - fy) / (r * r);
      H.comp[0][i] = fr / r;
      H.comp[3][i] = fr / r;
      H.comp[5][i] = frr;
    }
    return H;
  }
  const VectorField g = gradient(f);
  for (int j = 0; j < c.n2(); ++j) {
    const Line l = row(f, j);
    for (int i = 0; i < c.n1(); ++i) {
      const auto k = static_cast<Eigen::Index>(c.index(i, j));
      H.comp[0][k] = d2(l, i, c.drho(), true);
      H.comp[3][k] = g.comp[0][k] / c.rho(i);
    }
  }
  for (int i = 0; i < c.n1(); ++i) {
    const Line l = col(f.values, c, i);
    for (int j = 0; j < c.n2(); ++j) H.comp[5][static_cast<Eigen::Index>(c.index(i, j))] = d2(l, j, c.dz(), false);
  }
  // Mixed derivative: d/drho of f_z, which is odd-free in rho so mirror holds.
  for (int j = 0; j < c.n2(); ++j) {
    const Line l{g.comp[2], c.index(0, j), 1, c.n1()};
    for (int i = 0; i < c.n1(); ++i) H.comp[2][static_cast<Eigen::Index>(c.index(i, j))] = d1(l, i, c.drho(), true);
  }
  return H;
}

ScalarField weighted_divergence(const ScalarField& w, const ScalarField& f) {
  const Chart& c = f.chart;
  require_grid(c);
  ScalarField out(c, f.metric);
  if (c.kind() == ChartKind::Radial) {
    const double h = c.log_spacing();
    const int n = c.n1();
    const Line lf = row(f, 0), lw = row(w, 0);
    for (int i = 0; i < n; ++i) {
      const double r = c.r(i);
      if (i > 0 && i < n - 1) {
        const double mu_p = 0.5 * (c.r(i + 1) * w(i + 1) + r * w(i));
        const double mu_m = 0.5 * (c.r(i - 1) * w(i - 1) + r * w(i));
        out(i) = (mu_p * (f(i + 1) - f(i)) - mu_m * (f(i) - f(i - 1))) / (h * h * r * r * r);
      } else {
        const double fy = d1(lf, i, h, false), fyy = d2(lf, i, h, false), wy = d1(lw, i, h, false);
        // (1/r^3) d/dy (r w f_y)
        out(i) = (r * w(i) * fy + r * wy * fy + r * w(i) * fyy) / (r * r * r);
      }
    }
    return out;
  }
  const double hr = c.drho(), hz = c.dz();
  for (int j = 0; j < c.n2(); ++j) {
    const Line lf = row(f, j), lw = row(w, j);
    for (int i = 0; i < c.n1(); ++i) {
      const double rho = c.rho(i);
      double term;
      if (i < c.n1() - 1) {
        const double fp = 0.5 * (w(i + 1, j) + w(i, j)) * (rho + 0.5 * hr) * (f(i + 1, j) - f(i, j));
        const double fm = i == 0 ? 0.0 : 0.5 * (w(i - 1, j) + w(i, j)) * (rho - 0.5 * hr) * (f(i, j) - f(i - 1, j));
        term = (fp - fm) / (hr * hr * rho);
      } else {
        const double fr = d1(lf, i, hr, true), frr = d2(lf, i, hr, true), wr = d1(lw, i, hr, true);
        term = w(i, j) * (frr + fr / rho) + wr * fr;
      }
      out(i, j) = term;
    }
  }
  for (int i = 0; i < c.n1(); ++i) {
    const Line lf = col(f.values, c, i), lw = col(w.values, c, i);
    for (int j = 0; j < c.n2(); ++j) {
      double term;
      if (j > 0 && j < c.n2() - 1) {
        const double fp = 0.5 * (w(i, j + 1) + w(i, j)) * (f(i, j + 1) - f(i, j));
        const double fm = 0.5 * (w(i, j - 1) + w(i, j)) * (f(i, j) - f(i, j - 1));
        term = (fp - fm) / (hz * hz);
      } else {
        term = w(i, j) * d2(lf, j, hz, false) + d1(lw, j, hz, false) * d1(lf, j, hz, false);
      }
      out(i, j) += term;
    }
  }
  return out;
}

}  // namespace penrose
