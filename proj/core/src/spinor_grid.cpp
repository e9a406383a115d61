#include <cmath>
#include <type_traits>

#include "penrose/errors.hpp"
#include "penrose/spinor.hpp"

namespace penrose::spinor {

SpinorGrid::SpinorGrid(int n_, double h_, Eigen::Vector3d origin_) : n(n_), h(h_), origin(std::move(origin_)) {
  if (n < 3 || !(h > 0.0)) fail(ErrorKind::DomainError, "spinor grid needs n >= 3 and h > 0");
  values.assign(static_cast<std::size_t>(n) * n * n, Spinor::Zero());
}

SpinorGrid SpinorGrid::sample(int n, double h, Eigen::Vector3d origin,
                              const std::function<Spinor(const Eigen::Vector3d&)>& f) {
  SpinorGrid g(n, h, std::move(origin));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) g.at(i, j, k) = f(g.point(i, j, k));
  return g;
}

namespace {

// Second-order derivative along axis `dir` of a nodal quantity.
template <class Get>
auto axis_derivative(int n, double h, int idx, Get&& get) {
  using T = std::decay_t<decltype(get(0))>;
  if (idx == 0) return T((-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h));
  if (idx == n - 1) return T((3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * h));
  return T((get(idx + 1) - get(idx - 1)) / (2.0 * h));
}

template <class Field>
auto partial(const Field& f, int n, double h, int i, int j, int k, int dir) {
  switch (dir) {
    case 0: return axis_derivative(n, h, i, [&](int a) { return f(a, j, k); });
    case 1: return axis_derivative(n, h, j, [&](int a) { return f(i, a, k); });
    default: return axis_derivative(n, h, k, [&](int a) { return f(i, j, a); });
  }
}

std::vector<double> sample_scalar(const SpinorGrid& g, const ScalarSampler& phi) {
  std::vector<double> out(g.values.size());
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        const double v = phi(g.point(i, j, k));
        if (!(v > 0.0)) fail(ErrorKind::DegenerateConformalFactor, "conformal factor must be positive");
        out[g.index(i, j, k)] = v;
      }
  return out;
}

}  // namespace

SpinorGrid dirac_flat(const CliffordFrame& frame, const SpinorGrid& psi) {
  SpinorGrid out(psi.n, psi.h, psi.origin);
  out.metric = psi.metric;
  auto f = [&](int i, int j, int k) -> Spinor { return psi.at(i, j, k); };
  for (int k = 0; k < psi.n; ++k)
    for (int j = 0; j < psi.n; ++j)
      for (int i = 0; i < psi.n; ++i) {
        Spinor s = Spinor::Zero();
        for (int d = 0; d < 3; ++d) s += frame.e(d) * Spinor(partial(f, psi.n, psi.h, i, j, k, d));
        out.at(i, j, k) = s;
      }
  return out;
}

SpinorGrid dirac_apply(const CliffordFrame& frame, const SpinorGrid& psi, const ScalarSampler& phi) {
  const auto ph = sample_scalar(psi, phi);
  SpinorGrid w = psi;
  for (std::size_t a = 0; a < w.values.size(); ++a) w.values[a] *= ph[a] * ph[a];
  SpinorGrid out = dirac_flat(frame, w);
  for (std::size_t a = 0; a < out.values.size(); ++a) out.values[a] /= std::pow(ph[a], 4);
  out.metric = MetricTag::Closed;
  return out;
}

SpinorGrid dirac_covariant(const CliffordFrame& frame, const SpinorGrid& psi, const ScalarSampler& phi) {
  const auto ph = sample_scalar(psi, phi);
  SpinorGrid out = dirac_flat(frame, psi);
  auto lp = [&](int i, int j, int k) { return std::log(ph[psi.index(i, j, k)]); };
  for (int k = 0; k < psi.n; ++k)
    for (int j = 0; j < psi.n; ++j)
      for (int i = 0; i < psi.n; ++i) {
        Eigen::Vector3d g;
        for (int d = 0; d < 3; ++d) g[d] = partial(lp, psi.n, psi.h, i, j, k, d);
        const std::size_t a = psi.index(i, j, k);
        out.values[a] = (out.values[a] + 2.0 * (frame.vector(g) * psi.values[a])) / (ph[a] * ph[a]);
      }
  out.metric = MetricTag::Closed;
  return out;
}

double max_difference(const SpinorGrid& a, const SpinorGrid& b, int margin) {
  if (a.n != b.n) fail(ErrorKind::DomainError, "spinor grids differ in size");
  double m = 0.0;
  for (int k = margin; k < a.n - margin; ++k)
    for (int j = margin; j < a.n - margin; ++j)
      for (int i = margin; i < a.n - margin; ++i) m = std::max(m, (a.at(i, j, k) - b.at(i, j, k)).norm());
  return m;
}

}  // namespace penrose::spinor
