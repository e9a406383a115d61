#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "penrose/conformal_data.hpp"
#include "penrose/radial_basis.hpp"
#include "penrose/surface.hpp"

namespace penrose::elliptic {

enum class BoundaryKind { Dirichlet, Robin, None };

// Boundary data on a surface. Robin means d_n f = coefficient * f with d_n
// the flat unit normal derivative pointing towards the end. On spheres the
// value is the constant (monopole) or cos(theta) coefficient (l = 1).
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::None;
  horizon::Surface surface;
  double value = 0.0;
  double coefficient = 0.0;
  // Optional angular profiles; override the constants when set.
  std::function<double(double theta)> value_profile;
  std::function<double(double theta)> coefficient_profile;

  static BoundarySpec dirichlet(horizon::Surface s, double value);
  static BoundarySpec robin(horizon::Surface s, double coefficient);
  static BoundarySpec none();
};

enum class AsymptoteKind { Constant, Linear };

// f -> c (constant) or f = c x_1 + O(1) (linear) at the end; the remainder
// decays like r^-decay_order.
struct AsymptoteSpec {
  AsymptoteKind kind = AsymptoteKind::Constant;
  double c = 0.0;
  int decay_order = 1;

  static AsymptoteSpec constant(double c) { return {AsymptoteKind::Constant, c, 1}; }
  static AsymptoteSpec linear(double c) { return {AsymptoteKind::Linear, c, 0}; }
};

struct SolveStats {
  double residual = 0.0;            // relative residual of the linear solve
  int iterations = 0;
  double boundary_residual = 0.0;   // sup misfit of the boundary condition
  double asymptote_residual = 0.0;  // misfit of the prescribed far-field behaviour
  std::vector<double> history;
};

// Closed-form radial solution: alpha + beta K(r) for constant asymptotes,
// (alpha h_plus + beta h_minus) x_1 / r for linear ones.
struct RadialMode {
  AsymptoteKind kind = AsymptoteKind::Constant;
  double alpha = 0.0;
  double beta = 0.0;
  std::shared_ptr<const RadialBasis> basis;

  // Monopole: f(r). Linear: h(r) with f = h(r) cos(theta).
  Jet profile(double r) const;
};

class PolarSolution;

class HarmonicField {
 public:
  BoundarySpec boundary;
  AsymptoteSpec asymptote;
  SolveStats stats;
  std::optional<RadialMode> radial;
  std::shared_ptr<const PolarSolution> polar;
  std::function<double(double, double)> custom_value;
  std::function<Eigen::Vector2d(double, double)> custom_gradient;
  // Value used on and inside the boundary surface when set.
  std::optional<double> inside_value;

  double value(double rho, double z) const;
  // Flat gradient (d/drho, d/dz).
  Eigen::Vector2d gradient(double rho, double z) const;
  bool inside(double rho, double z) const;
};

// Exterior Laplace problem Delta_g f = 0 outside bc.surface. Radial data on
// spheres uses the closed-form modes; the grid path lives in polar_solver.hpp.
HarmonicField solve_exterior_harmonic(std::shared_ptr<const RadialBasis> basis, const BoundarySpec& bc,
                                      const AsymptoteSpec& asym);

enum class DoubledMethod { Direct, Reflection };

// Harmonic function of W^4 delta on two copies of {r > R} glued along r = R,
// tending to `limit_plus` on the first sheet's end and `limit_minus` on the
// second's. Sheet is +1 or -1.
struct DoubledField {
  double R = 0.0;
  double limit_plus = 0.0, limit_minus = 0.0;
  std::vector<double> y;       // signed log coordinate; sheet +1 for y > log R
  std::vector<double> values;
  SolveStats stats;

  double value(double r, int sheet) const;
};

DoubledField solve_doubled_harmonic(const std::function<Jet(double)>& W, double R, double limit_plus,
                                    double limit_minus, DoubledMethod method = DoubledMethod::Direct,
                                    int nodes_per_unit_log = 400);

}  // namespace penrose::elliptic
