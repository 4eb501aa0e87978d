#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "liftscale/distributions.hpp"
#include "liftscale/infomeasure.hpp"
#include "liftscale/lift.hpp"

namespace liftscale {

/// Observed counts over sorted distinct labels, row-major by x label.
struct ContingencyTable {
  std::vector<double> x_labels;
  std::vector<double> y_labels;
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;

  ContingencyTable(std::vector<double> x_labels, std::vector<double> y_labels,
                   std::vector<std::uint64_t> counts);

  /// Labels 0..rows-1 and 0..cols-1.
  static ContingencyTable from_rows(const std::vector<std::vector<std::uint64_t>>& rows);
  /// Tabulates exact (x, y) values; labels are the distinct observed values.
  static ContingencyTable from_samples(std::span<const Point> samples);

  std::size_t nx() const { return x_labels.size(); }
  std::size_t ny() const { return y_labels.size(); }
  std::uint64_t count(std::size_t i, std::size_t j) const { return counts[i * ny() + j]; }

  /// (count + smoothing) / (n + smoothing * cells).
  DiscreteJoint to_joint(double smoothing = 0.0) const;
};

inline constexpr double kDefaultSmoothing = 0.5;

LiftField empirical_discrete_lift(const ContingencyTable& table,
                                  double smoothing = kDefaultSmoothing,
                                  double tol = kEstimatedTol);

MiReport empirical_mi(const ContingencyTable& table, double smoothing = 0.0);

struct Bandwidth {
  enum class Rule { Silverman, Fixed };
  Rule rule = Rule::Silverman;
  double h_x = 0.0;
  double h_y = 0.0;

  static Bandwidth silverman() { return {}; }
  static Bandwidth fixed(double h_x, double h_y) { return {Rule::Fixed, h_x, h_y}; }
};

/// 1.06 * sd * n^(-1/5)
double silverman_bandwidth(std::span<const double> values);

struct KernelLiftEstimate {
  double bandwidth_x = 0.0;
  double bandwidth_y = 0.0;
  LiftField field;
  std::size_t n = 0;
};

inline constexpr std::size_t kMinKernelSample = 20;

/// Product-Gaussian KDE of the joint over 1D KDEs of each marginal. Kernels
/// are cut at 7 bandwidths.
KernelLiftEstimate kernel_lift(std::span<const Point> samples, const std::vector<double>& grid_x,
                               const std::vector<double>& grid_y,
                               const Bandwidth& bandwidth = Bandwidth::silverman(),
                               double tol = kEstimatedTol);

/// Empirical F(x, y) / (G(x) H(y)).
double empirical_sibuya(std::span<const Point> samples, double x, double y);

struct TargetingResult {
  double target_lo = 0.0;
  double target_hi = 0.0;
  bool target_is_interval = false;
  double x_opt = 0.0;
  double lift_at_opt = 0.0;
  double baseline_rate = 0.0;
  double boosted_rate = 0.0;
  double expected_extra_per_n = 0.0;
};

/// Profile x maximizing L(x, target); ties go to the smallest x.
TargetingResult target_profile(const DiscreteJoint& dist, double target_y);
TargetingResult target_profile(const ContingencyTable& table, double target_y);

/// Interval target [y_lo, y_hi]; x ranges over x_grid. The lift at x is
/// P(Y in T | X = x) / P(Y in T).
TargetingResult target_profile(const ContinuousJoint& dist, double y_lo, double y_hi,
                               const std::vector<double>& x_grid);
TargetingResult target_profile(const NamedFamily& dist, double y_lo, double y_hi,
                               const std::vector<double>& x_grid);

}  // namespace liftscale
