#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "liftscale/distributions.hpp"

namespace liftscale {

enum class LiftLabel { Lift, Inhibit, Neutral, Zero, Undefined };

std::string_view label_name(LiftLabel label) noexcept;

/// Neutral band half-widths for analytic and estimated fields.
inline constexpr double kAnalyticTol = 1e-9;
inline constexpr double kEstimatedTol = 0.05;

/// Zero iff value == 0; Neutral iff |value - 1| <= tol; Lift above the band,
/// Inhibit below it; Undefined for non-finite values.
LiftLabel classify(double value, double tol);

/// Lift values on a rectangular grid, stored row-major (x index outer).
/// Undefined cells hold NaN in `values`; consumers should key off `labels`.
struct LiftField {
  std::vector<double> grid_x;
  std::vector<double> grid_y;
  std::vector<double> values;
  std::vector<LiftLabel> labels;

  std::size_t nx() const { return grid_x.size(); }
  std::size_t ny() const { return grid_y.size(); }
  double value(std::size_t i, std::size_t j) const { return values[i * ny() + j]; }
  LiftLabel label(std::size_t i, std::size_t j) const { return labels[i * ny() + j]; }
};

/// Masses of the lift, inhibition and neutral sets under mu_X x mu_Y.
struct RegionSummary {
  double mass_lift = 0.0;
  double mass_inhibit = 0.0;
  double mass_neutral = 0.0;
};

LiftField discrete_lift(const DiscreteJoint& dist, double tol = kAnalyticTol);

/// rho(x, y) / (rho_X(x) rho_Y(y)).
double continuous_lift_at(const ContinuousJoint& dist, double x, double y);

/// As above; the bivariate normal uses its closed form so that tails stay
/// accurate where the densities underflow.
double continuous_lift_at(const NamedFamily& dist, double x, double y);

/// 0 off every branch; on branch n (smallest index wins on overlaps)
/// 2 a_n / (pi rho_Y(phi_n(x)) sqrt(1 + phi_n'(x)^2)).
double curve_lift_at(const CurveSingularJoint& dist, double x, double y,
                     double on_curve_tol = 1e-9);

/// Sibuya's dependence function F(x, y) / (G(x) H(y)).
double sibuya_omega_at(const JointDistribution& dist, double x, double y);

/// Evaluates the class-appropriate pointwise lift on the grid. Pointwise
/// errors become Undefined cells.
LiftField lift_grid(const JointDistribution& dist, const std::vector<double>& grid_x,
                    const std::vector<double>& grid_y, double tol = kAnalyticTol);

/// Exact summation for discrete laws, adaptive cubature over the integration
/// box for absolutely continuous ones. Curve-singular input is rejected.
RegionSummary region_summary(const JointDistribution& dist, double tol = kAnalyticTol);

/// (pi/2) * integral over [a, b] of sum_n L(x, phi_n(x)) rho_X(x)
/// rho_Y(phi_n(x)) sqrt(1 + phi_n'(x)^2) dx, i.e. the nu_1-integral of
/// (pi/2) L over the arcs above [a, b]. Equals mu_X([a, b]).
double curve_line_integral(const CurveSingularJoint& dist, double a, double b);

}  // namespace liftscale
