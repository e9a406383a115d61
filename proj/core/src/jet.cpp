#include "penrose/jet.hpp"

#include <cmath>

namespace penrose {

Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2}; }

Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

Jet operator/(const Jet& a, const Jet& b) {
  // (1/b)' = -b'/b^2, (1/b)'' = 2b'^2/b^3 - b''/b^2
  const double ib = 1.0 / b.v;
  const Jet inv{ib, -b.d1 * ib * ib, 2.0 * b.d1 * b.d1 * ib * ib * ib - b.d2 * ib * ib};
  return a * inv;
}

Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.d1, s * a.d2}; }
Jet operator+(double s, const Jet& a) { return {s + a.v, a.d1, a.d2}; }

Jet log(const Jet& a) {
  const double ia = 1.0 / a.v;
  return {std::log(a.v), a.d1 * ia, a.d2 * ia - a.d1 * a.d1 * ia * ia};
}

Jet pow(const Jet& a, double p) {
  const double f = std::pow(a.v, p);
  const double f1 = p * std::pow(a.v, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return {f, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2};
}

}  // namespace penrose
