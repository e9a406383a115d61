#include "penrose/clifford.hpp"

namespace penrose::spinor {

namespace {
constexpr std::complex<double> I(0.0, 1.0);
}

CliffordFrame::CliffordFrame() {
  Mat2 s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  e_ = {-I * s1, -I * s2, -I * s3};
}

Mat2 CliffordFrame::vector(const Eigen::Vector3d& v) const { return v[0] * e_[0] + v[1] * e_[1] + v[2] * e_[2]; }

Mat2 CliffordFrame::i_nu(const Eigen::Vector3d& nu) const { return I * vector(nu); }

Spinor CliffordFrame::one() const { return Spinor(1.0, 0.0); }

Spinor CliffordFrame::eta() const { return e_[0] * e_[2] * one(); }

Spinor clifford_action(const CliffordFrame& frame, const Eigen::Vector3d& v, const Spinor& psi) {
  return frame.vector(v) * psi;
}

EigenBasis reflection_eigenspinors(const CliffordFrame& frame) {
  EigenBasis b;
  b.plus = frame.one();
  b.minus = frame.eta();
  const Mat2 inu = frame.i_nu(Eigen::Vector3d::UnitZ());
  b.projector_plus = 0.5 * (Mat2::Identity() + inu);
  b.projector_minus = 0.5 * (Mat2::Identity() - inu);
  return b;
}

}  // namespace penrose::spinor
