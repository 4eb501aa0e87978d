#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "liftscale/distributions.hpp"

namespace liftscale {

/// Uniform grid of square buckets over a point set. Counts are exact; the
/// buckets only limit which points get distance-tested.
class BallCounter {
 public:
  BallCounter(std::span<const Point> points, double cell_width);

  /// #{p : |p - center| <= eps}
  std::size_t count(Point center, double eps) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct CellKey {
    std::int64_t cx;
    std::int64_t cy;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };
  struct Range {
    std::size_t begin;
    std::size_t end;
  };

  CellKey key_of(double x, double y) const;

  double width_;
  double x0_;
  double y0_;
  std::vector<Point> points_;  // grouped by cell
  std::unordered_map<CellKey, Range, CellHash> cells_;
};

/// Empirical mass of the closed eps-ball divided by its area.
double ball_density(std::span<const Point> points, Point center, double eps);

struct BallDensityProfile {
  Point center;
  std::size_t n = 0;
  std::vector<double> radii;  // decreasing
  std::vector<std::size_t> counts;
  std::vector<double> densities;
};

/// Geometric schedule eps_j = eps_max (eps_min / eps_max)^(j / (k - 1)).
std::vector<double> geometric_radii(double eps_max, double eps_min, std::size_t k);

BallDensityProfile ball_profile(std::span<const Point> points, Point center, double eps_max,
                                double eps_min, std::size_t k);

struct ScalingEstimate {
  Point center;
  double s_hat = 0.0;
  double fit_r2 = 0.0;
  std::vector<double> radii_used;
};

/// Least-squares slope of log(ball mass) against log(eps), keeping radii whose
/// ball holds at least `min_count` points.
ScalingEstimate scaling_exponent(std::span<const Point> points, Point center, double eps_max,
                                 double eps_min, std::size_t k, std::size_t min_count = 10);

ScalingEstimate scaling_exponent(const BallDensityProfile& profile, std::size_t min_count = 10);

/// w_N(x) = sum_{n=1}^{N} cos(2 pi 3^n x) / 2^n
struct WeierstrassCurve {
  int n_terms = 30;
};

/// Phases 3^n x are reduced mod 1 with an exact two-product, so the sum is
/// accurate for every representable x.
double weierstrass_eval(const WeierstrassCurve& curve, double x);

/// Uniform grid on [0, 1/2] paired with w values.
std::vector<Point> weierstrass_grid(const WeierstrassCurve& curve, std::size_t n_points);

/// (X, w(X)) with X ~ U[0, 1/2].
std::vector<Point> sample_weierstrass_graph(const WeierstrassCurve& curve, std::size_t n,
                                            std::uint64_t seed);

}  // namespace liftscale
