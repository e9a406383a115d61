#pragma once

#include <Eigen/Core>

#include "penrose/conformal_data.hpp"
#include "penrose/fields.hpp"

namespace penrose::geometry {

struct MassEstimate {
  double mass = 0.0;
  bool fitted = false;
  double residual = 0.0;
};

// m = 2ab from the end asymptotics. Throws NonAsymptoticallyFlat when the
// fitted residual exceeds the data's tolerance.
MassEstimate adm_mass(const ConformalData& data);
// Least-squares (a, b) from samples of U on [r_fit, 2 r_fit].
MassEstimate adm_mass_from_samples(std::span<const double> r, std::span<const double> u, double tolerance);

// R = -8 U^-5 Delta U with U sampled on the chart and differentiated by
// finite differences (one-sided rows at the chart ends).
ScalarField scalar_curvature(const ConformalData& data, const Chart& chart);
ScalarField sample_factor(const ConformalData& data, const Chart& chart, MetricTag tag = MetricTag::Base);

// Hessian of f in (phi^4 U^4) delta written with flat coordinate
// derivatives: d2f - 2(dw x df + df x dw) + 2 <dw, df> delta, w = log(U phi).
// Norms follow from |T|^2 = (U phi)^-8 sum T_ij^2.
Eigen::Matrix3d conformal_hessian(const Eigen::Matrix3d& d2f, const Eigen::Vector3d& df,
                                  const Eigen::Vector3d& dlog_factor);
SymTensorField conformal_hessian(const ScalarField& f, const ScalarField& phi, const ConformalData& base);

struct TransferResidual {
  ScalarField lhs;  // Delta_{g1}(u phi)
  ScalarField rhs;  // u^5 Delta_{g2} phi + phi Delta_{g1} u, g2 = u^4 g1
};
TransferResidual laplacian_transfer(const ScalarField& u, const ScalarField& phi, const ConformalData& g1);

// Delta_g f for g = W^4 delta: W^-6 div(W^2 grad f).
ScalarField conformal_laplacian(const ScalarField& W, const ScalarField& f);

enum class RescaleKind { GradientNorm, VolumeElement, ScalarCurvature };
ScalarField rescale_under_conformal(const ScalarField& field, const ScalarField& phi, RescaleKind kind);

}  // namespace penrose::geometry
