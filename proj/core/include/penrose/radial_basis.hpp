#pragma once

#include <vector>

#include "penrose/conformal_data.hpp"
#include "penrose/jet.hpp"

namespace penrose::elliptic {

// Separable solutions of Delta_g f = 0 for radial g = U^4 delta.
//
//   monopole:  f = alpha + beta K(r),  K(r) = int_r^inf ds / (s^2 U^2)
//   l = 1:     f = h(r) x_1 / r,  h_yy + (1 + 2 r U'/U) h_y - 2 h = 0,  y = log r
//
// The growing l = 1 solution is normalised by U h / (a r) -> 1 and started
// regular at the origin; the decaying one behaves like r^-2 / U. Pure
// a + b/r factors use closed forms, everything else is tabulated by RK4.
class RadialBasis {
 public:
  explicit RadialBasis(const ConformalData& data);

  Jet K(double r) const;
  Jet growing(double r) const;
  Jet decaying(double r) const;

  bool closed_form() const noexcept { return closed_; }
  const ConformalData& data() const noexcept { return data_; }
  double r_lo() const noexcept { return r_lo_; }
  double r_hi() const noexcept { return r_hi_; }

 private:
  struct Table {
    std::vector<double> f, fy;  // values and y-derivatives at the nodes
  };
  Jet interpolate(const Table& t, double r) const;
  double coeff(double r) const;  // 1 + 2 r U'/U

  ConformalData data_;
  bool closed_ = false;
  double r_lo_ = 0.0, r_hi_ = 0.0, y0_ = 0.0, hy_ = 0.0;
  int n_ = 0;
  Table K_, plus_, minus_;
  double plus_tail_ = 0.0;  // decaying admixture of the growing mode beyond r_hi
};

}  // namespace penrose::elliptic
