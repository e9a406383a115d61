#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <vector>

#include "penrose/chart.hpp"

namespace penrose {

// Which metric norms of a field are meant in: flat, the data metric g, the
// doubled metric, or the closed-off metric of the level-set construction.
enum class MetricTag { Flat, Base, Doubled, Closed };

// Every chart node is a Cartesian point: radial nodes sit on the positive
// x_1 (= z) axis, axisymmetric nodes in the half plane y = 0 with x = rho.
Eigen::Vector3d node_point(const Chart& chart, int i, int j = 0);

struct ScalarField {
  Chart chart;
  MetricTag metric = MetricTag::Base;
  Eigen::VectorXd values;

  ScalarField(Chart c, MetricTag m = MetricTag::Base);
  static ScalarField sample(const Chart& c, const std::function<double(const Eigen::Vector3d&)>& f,
                            MetricTag m = MetricTag::Base);

  double& operator()(int i, int j = 0) { return values[static_cast<Eigen::Index>(chart.index(i, j))]; }
  double operator()(int i, int j = 0) const { return values[static_cast<Eigen::Index>(chart.index(i, j))]; }
};

// Cartesian components.
struct VectorField {
  Chart chart;
  MetricTag metric = MetricTag::Base;
  std::array<Eigen::VectorXd, 3> comp;

  VectorField(Chart c, MetricTag m = MetricTag::Base);
  Eigen::Vector3d at(int i, int j = 0) const;
};

// Six independent Cartesian components, ordered xx, xy, xz, yy, yz, zz.
struct SymTensorField {
  Chart chart;
  MetricTag metric = MetricTag::Base;
  std::array<Eigen::VectorXd, 6> comp;

  SymTensorField(Chart c, MetricTag m = MetricTag::Base);
  Eigen::Matrix3d at(int i, int j = 0) const;
  void set(int i, int j, const Eigen::Matrix3d& t);
};

// Second-order finite differences; one-sided at chart ends, mirror
// symmetry across the axis.
VectorField gradient(const ScalarField& f);
SymTensorField hessian(const ScalarField& f);
// Flat divergence of w * grad f in three dimensions, conservative stencil.
ScalarField weighted_divergence(const ScalarField& w, const ScalarField& f);

}  // namespace penrose
