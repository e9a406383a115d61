#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "penrose/errors.hpp"
#include "penrose/flow.hpp"
#include "penrose/jet.hpp"

namespace penrose::detail {

struct RadialGrid {
  std::vector<double> r, dy;  // nodes and trapezoid weights in y = log r
};

inline RadialGrid radial_grid(double r_in, double r_out, int ppd) {
  if (!(r_out > r_in) || !(r_in > 0.0)) fail(ErrorKind::DomainError, "bad radial quadrature range");
  const double span = std::log(r_out / r_in);
  const int n = std::max(16, static_cast<int>(std::ceil(ppd * span / std::log(10.0))));
  const double h = span / n;
  RadialGrid g;
  for (int i = 0; i <= n; ++i) {
    g.r.push_back(r_in * std::exp(i * h));
    g.dy.push_back(i == 0 || i == n ? 0.5 * h : h);
  }
  return g;
}

inline double radial_curvature(const Jet& U, double r) { return -8.0 * (U.d2 + 2.0 * U.d1 / r) / std::pow(U.v, 5); }

inline double mass_scale(const ConformalData& data) {
  const double m = 2.0 * data.asymptotics().a * data.asymptotics().b;
  return m > 0.0 ? m : 1.0;
}

inline double inner_radius(const ConformalData& data, double R0) {
  if (R0 > 0.0) return R0;
  return std::max(1e-3 * mass_scale(data), data.radial_domain_min() * 1.0001);
}

// Exit time of the sphere of radius r; infinity when never swallowed.
inline double radial_exit_time(const flow::FlowTrajectory& traj, double r) {
  const double te = traj.exit_time(0.0, r);
  if (te < traj.final_time() || traj.swallowed(0.0, r)) return te;
  return std::numeric_limits<double>::infinity();
}

struct TimeSample {
  double q = 0.0, p = 0.0;
  int guards = 0;
};

struct PointIntegral {
  double Q = 0.0, P = 0.0;
  double tail_Q = 0.0, tail_P = 0.0;
  int guards = 0;
};

// Trapezoid rule in t up to the exit time; the last interval is cut at t(x)
// with the integrand interpolated linearly across it. Points never swallowed
// get a tail estimate f(t_max)/2 from e^-2t decay.
template <class Sample>
PointIntegral integrate_in_time(const std::vector<double>& times, double t_exit, Sample&& sample) {
  PointIntegral out;
  if (times.empty() || t_exit <= times.front()) return out;
  TimeSample prev = sample(std::size_t{0});
  out.guards += prev.guards;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const TimeSample cur = sample(k);
    out.guards += cur.guards;
    const double h = times[k] - times[k - 1];
    if (times[k] <= t_exit) {
      out.Q += 0.5 * h * (prev.q + cur.q);
      out.P += 0.5 * h * (prev.p + cur.p);
      prev = cur;
      continue;
    }
    const double tau = t_exit - times[k - 1];
    const double s = h > 0.0 ? tau / h : 0.0;
    out.Q += 0.5 * tau * (2.0 * prev.q + s * (cur.q - prev.q));
    out.P += 0.5 * tau * (2.0 * prev.p + s * (cur.p - prev.p));
    return out;
  }
  out.tail_Q = 0.5 * prev.q;
  out.tail_P = 0.5 * prev.p;
  return out;
}

}  // namespace penrose::detail
