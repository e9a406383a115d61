#pragma once

namespace penrose {

// Value of a function of one variable together with its first two
// derivatives. Arithmetic propagates the derivatives exactly, which is how
// radial profiles (conformal factors, harmonic modes) are differentiated
// without finite differences.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator*(double s, const Jet& a);
Jet operator+(double s, const Jet& a);
Jet log(const Jet& a);
Jet pow(const Jet& a, double p);

}  // namespace penrose
