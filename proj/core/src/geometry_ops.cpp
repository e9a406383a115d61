#include <cmath>

#include "penrose/errors.hpp"
#include "penrose/geometry.hpp"

namespace penrose::geometry {

namespace {

void require_positive_field(const ScalarField& phi) {
  if (!(phi.values.minCoeff() > 0.0)) fail(ErrorKind::DegenerateConformalFactor, "conformal factor must be positive");
}

}  // namespace

MassEstimate adm_mass(const ConformalData& data) {
  const Asymptotics& a = data.asymptotics();
  if (a.fitted && a.residual > a.tolerance)
    fail(ErrorKind::NonAsymptoticallyFlat,
         "a + b/r fit residual " + std::to_string(a.residual) + " exceeds " + std::to_string(a.tolerance));
  return {2.0 * a.a * a.b, a.fitted, a.residual};
}

MassEstimate adm_mass_from_samples(std::span<const double> r, std::span<const double> u, double tolerance) {
  const Asymptotics a = fit_asymptotics(r, u);
  if (a.residual > tolerance)
    fail(ErrorKind::NonAsymptoticallyFlat, "a + b/r fit residual " + std::to_string(a.residual));
  return {2.0 * a.a * a.b, true, a.residual};
}

ScalarField sample_factor(const ConformalData& data, const Chart& chart, MetricTag tag) {
  return ScalarField::sample(
      chart, [&](const Eigen::Vector3d& x) { return data.factor(std::hypot(x.x(), x.y()), x.z()); }, tag);
}

ScalarField scalar_curvature(const ConformalData& data, const Chart& chart) {
  const ScalarField U = sample_factor(data, chart);
  ScalarField one(chart);
  one.values.setOnes();
  ScalarField R = weighted_divergence(one, U);
  R.values = -8.0 * R.values.array() / U.values.array().pow(5);
  return R;
}

Eigen::Matrix3d conformal_hessian(const Eigen::Matrix3d& d2f, const Eigen::Vector3d& df,
                                  const Eigen::Vector3d& dw) {
  const Eigen::Matrix3d cross = dw * df.transpose();
  return d2f - 2.0 * (cross + cross.transpose()) + 2.0 * dw.dot(df) * Eigen::Matrix3d::Identity();
}

SymTensorField conformal_hessian(const ScalarField& f, const ScalarField& phi, const ConformalData& base) {
  require_positive_field(phi);
  const ScalarField U = sample_factor(base, f.chart);
  ScalarField w(f.chart);
  w.values = (U.values.array() * phi.values.array()).log();
  const VectorField df = gradient(f), dw = gradient(w);
  const SymTensorField d2f = hessian(f);
  SymTensorField out(f.chart, f.metric);
  for (int j = 0; j < f.chart.n2(); ++j)
    for (int i = 0; i < f.chart.n1(); ++i) out.set(i, j, conformal_hessian(d2f.at(i, j), df.at(i, j), dw.at(i, j)));
  return out;
}

ScalarField conformal_laplacian(const ScalarField& W, const ScalarField& f) {
  ScalarField w2(W.chart);
  w2.values = W.values.array().square();
  ScalarField out = weighted_divergence(w2, f);
  out.values = out.values.array() / W.values.array().pow(6);
  return out;
}

TransferResidual laplacian_transfer(const ScalarField& u, const ScalarField& phi, const ConformalData& g1) {
  if (!(u.values.minCoeff() > 0.0)) fail(ErrorKind::DegenerateConformalFactor, "u must be positive");
  const ScalarField U = sample_factor(g1, u.chart);
  ScalarField uphi(u.chart), W2(u.chart);
  uphi.values = u.values.array() * phi.values.array();
  W2.values = u.values.array() * U.values.array();
  ScalarField lhs = conformal_laplacian(U, uphi);
  const ScalarField lap2 = conformal_laplacian(W2, phi);
  const ScalarField lap1 = conformal_laplacian(U, u);
  ScalarField rhs(u.chart);
  rhs.values = u.values.array().pow(5) * lap2.values.array() + phi.values.array() * lap1.values.array();
  return {std::move(lhs), std::move(rhs)};
}

ScalarField rescale_under_conformal(const ScalarField& field, const ScalarField& phi, RescaleKind kind) {
  require_positive_field(phi);
  const double p = kind == RescaleKind::GradientNorm ? -2.0 : kind == RescaleKind::VolumeElement ? 6.0 : -4.0;
  ScalarField out = field;
  out.values = field.values.array() * phi.values.array().pow(p);
  return out;
}

}  // namespace penrose::geometry
