#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "liftscale/distributions.hpp"

namespace liftscale {

enum class MiMethod { ExactSum, Quadrature, ClosedForm, CurveQuadrature, MonteCarlo };

std::string_view method_name(MiMethod method) noexcept;

/// Mutual information in nats.
struct MiReport {
  double value = 0.0;
  MiMethod method = MiMethod::ExactSum;
  double abs_error_estimate = 0.0;
  std::size_t n_evals = 0;
};

struct MiOptions {
  double max_abs_error = 1e-3;
  std::size_t max_evals = std::size_t{1} << 22;
  /// When the cubature budget runs out, report a Monte Carlo estimate
  /// instead of raising QuadratureNotConverged.
  bool monte_carlo_fallback = false;
  std::size_t monte_carlo_samples = 1'000'000;
  std::uint64_t seed = 42;
};

MiReport mi_discrete(const DiscreteJoint& dist);

MiReport mi_continuous(const ContinuousJoint& dist, const MiOptions& options = {});
MiReport mi_continuous(const NamedFamily& dist, const MiOptions& options = {});

/// -log(1 - r^2) / 2.
MiReport mi_bvn_closed_form(double r);

/// integral of rho_X(x) sum_n a_n log L(x, phi_n(x)) dx.
MiReport mi_curve(const CurveSingularJoint& dist);

/// Sample mean of log L over draws from the joint law; 1-sigma error bar.
MiReport mi_monte_carlo(const JointDistribution& dist, std::size_t n, std::uint64_t seed);

/// Dispatches to the method matching the distribution class.
MiReport mutual_information(const JointDistribution& dist, const MiOptions& options = {});

struct CounterexampleRow {
  double r = 0.0;
  double mi = 0.0;
  double limit_mi = 0.0;
  bool exceeds = false;
};

/// Closed-form MI along the schedule against the MI of the singular limit
/// (X ~ N(0,1), Y = X). The last row is the limit itself, with r = 1.
std::vector<CounterexampleRow> convergence_counterexample(const std::vector<double>& r_schedule);

}  // namespace liftscale
