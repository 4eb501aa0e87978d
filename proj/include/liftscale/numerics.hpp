#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "liftscale/error.hpp"

namespace liftscale {

/// Axis-aligned rectangle; any edge may be infinite.
struct Box {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;

  bool finite() const {
    return std::isfinite(x_lo) && std::isfinite(x_hi) && std::isfinite(y_lo) &&
           std::isfinite(y_hi);
  }
  bool contains(double x, double y) const {
    return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi;
  }
  static Box plane() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf, -inf, inf};
  }
};

namespace numerics {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

inline double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_evals = std::size_t{1} << 22;
  /// Half-width of the core square; tiles outside it are tail tiles.
  double core_half_width = 8.0;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t n_evals = 0;
  bool converged = false;
};

template <std::size_t K>
struct QuadratureResultN {
  std::array<double, K> value{};
  double abs_error = 0.0;
  std::size_t n_evals = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b]; either end
/// may be infinite.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const QuadratureOptions& options = {});

/// Adaptive tensor-product G7/K15 cubature over a box with possibly infinite
/// edges. The plane is tiled into a core square and tail tiles; tail tiles
/// start pre-split 2x2 and infinite sides are mapped onto [0, 1).
QuadratureResult integrate_2d(const std::function<double(double, double)>& f, const Box& box,
                              const QuadratureOptions& options = {});

/// Three-output variant sharing one subdivision (error is the L1 sum).
QuadratureResultN<3> integrate_2d_3(
    const std::function<std::array<double, 3>(double, double)>& f, const Box& box,
    const QuadratureOptions& options = {});

/// Root of f on [lo, hi] where f(lo), f(hi) have opposite signs (or one is 0).
/// Newton steps with df, falling back to bisection whenever a step leaves the
/// bracket. Terminates when the bracket is narrower than xtol.
double find_root_bracketed(const std::function<double(double)>& f,
                           const std::function<double(double)>& df, double lo, double hi,
                           double xtol = 1e-10);

/// Plain bisection for a sign change of g on [lo, hi].
double bisect_sign_change(const std::function<double(double)>& g, double lo, double hi,
                          double xtol = 1e-14);

/// Piecewise-linear inverse CDF tabulated from a density on a finite interval.
class TabulatedInverseCdf {
 public:
  TabulatedInverseCdf() = default;
  TabulatedInverseCdf(const std::function<double(double)>& density, double lo, double hi,
                      std::size_t n_points = 4096);

  double quantile(double u) const;
  double lo() const { return grid_.front(); }
  double hi() const { return grid_.back(); }
  bool empty() const { return grid_.empty(); }

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

}  // namespace numerics
}  // namespace liftscale
