#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <utility>

namespace penrose::spinor {

using Spinor = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

// Clifford multiplication on 2-component spinors of R^3 with e_j = -i sigma_j,
// so e_i e_j + e_j e_i = -2 delta_ij and i nu. = sigma . nu for unit nu.
class CliffordFrame {
 public:
  CliffordFrame();

  const Mat2& e(int j) const { return e_[j]; }
  Mat2 vector(const Eigen::Vector3d& v) const;  // v . = sum v_j e_j
  Mat2 i_nu(const Eigen::Vector3d& nu) const;   // i nu .

  // Basis for the boundary splitting: one is the +1 eigenspinor of
  // i e_1 e_2 and eta = (e_1 e_3) . one its -1 partner.
  Spinor one() const;
  Spinor eta() const;

 private:
  std::array<Mat2, 3> e_;
};

Spinor clifford_action(const CliffordFrame& frame, const Eigen::Vector3d& v, const Spinor& psi);

struct EigenBasis {
  Spinor plus, minus;
  Mat2 projector_plus, projector_minus;
};
// Eigenspinors of i nu for nu = e_3 (equivalently of i e_1 e_2).
EigenBasis reflection_eigenspinors(const CliffordFrame& frame);

}  // namespace penrose::spinor
