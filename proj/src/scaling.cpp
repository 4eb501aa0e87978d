#include "liftscale/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "liftscale/error.hpp"

namespace liftscale {

namespace {

void check_points(std::span<const Point> points) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "point set is empty");
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorCode::InvalidArgument, "points must be finite");
    }
  }
}

// Cell indices are clamped so that far outliers share edge buckets rather
// than overflowing.
constexpr double kMaxCell = 4.0e18;

std::int64_t cell_index(double v) {
  return static_cast<std::int64_t>(std::clamp(std::floor(v), -kMaxCell, kMaxCell));
}

}  // namespace

std::size_t BallCounter::CellHash::operator()(const CellKey& k) const noexcept {
  const auto a = static_cast<std::uint64_t>(k.cx);
  const auto b = static_cast<std::uint64_t>(k.cy);
  return static_cast<std::size_t>(a * 0x9E3779B97F4A7C15ull ^ (b + 0x632BE59BD9B4E019ull + (a << 6)));
}

BallCounter::BallCounter(std::span<const Point> points, double cell_width) : width_(cell_width) {
  check_points(points);
  if (!(cell_width > 0.0) || !std::isfinite(cell_width)) {
    fail(ErrorCode::InvalidArgument, "cell width must be positive");
  }
  x0_ = points.front().x;
  y0_ = points.front().y;
  for (const auto& p : points) {
    x0_ = std::min(x0_, p.x);
    y0_ = std::min(y0_, p.y);
  }
  std::vector<std::pair<CellKey, std::size_t>> keyed;
  keyed.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    keyed.push_back({key_of(points[i].x, points[i].y), i});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.cx != b.first.cx) return a.first.cx < b.first.cx;
    if (a.first.cy != b.first.cy) return a.first.cy < b.first.cy;
    return a.second < b.second;
  });
  points_.reserve(points.size());
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) {
      points_.push_back(points[keyed[j].second]);
      ++j;
    }
    cells_.emplace(keyed[i].first, Range{i, j});
    i = j;
  }
}

BallCounter::CellKey BallCounter::key_of(double x, double y) const {
  return {cell_index((x - x0_) / width_), cell_index((y - y0_) / width_)};
}

std::size_t BallCounter::count(Point center, double eps) const {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "eps must be positive");
  const double e2 = eps * eps;
  const auto inside = [&](const Point& p) {
    const double dx = p.x - center.x, dy = p.y - center.y;
    return dx * dx + dy * dy <= e2;
  };
  const CellKey lo = key_of(center.x - eps, center.y - eps);
  const CellKey hi = key_of(center.x + eps, center.y + eps);
  const double span_x = static_cast<double>(hi.cx - lo.cx + 1);
  const double span_y = static_cast<double>(hi.cy - lo.cy + 1);

  std::size_t n = 0;
  if (span_x * span_y > static_cast<double>(cells_.size())) {
    for (const auto& p : points_) n += inside(p);
    return n;
  }
  for (std::int64_t cx = lo.cx; cx <= hi.cx; ++cx) {
    for (std::int64_t cy = lo.cy; cy <= hi.cy; ++cy) {
      const auto it = cells_.find({cx, cy});
      if (it == cells_.end()) continue;
      for (std::size_t i = it->second.begin; i < it->second.end; ++i) n += inside(points_[i]);
    }
  }
  return n;
}

double ball_density(std::span<const Point> points, Point center, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "eps must be positive");
  const BallCounter counter(points, eps);
  const double mass = static_cast<double>(counter.count(center, eps)) /
                      static_cast<double>(points.size());
  return mass / (std::numbers::pi * eps * eps);
}

std::vector<double> geometric_radii(double eps_max, double eps_min, std::size_t k) {
  if (!(eps_min > 0.0) || !(eps_min < eps_max) || !std::isfinite(eps_max)) {
    fail(ErrorCode::InvalidArgument, "radii need 0 < eps_min < eps_max");
  }
  if (k < 4) fail(ErrorCode::InvalidArgument, "at least 4 radii are required");
  std::vector<double> radii(k);
  const double ratio = eps_min / eps_max;
  for (std::size_t j = 0; j < k; ++j) {
    radii[j] = eps_max * std::pow(ratio, static_cast<double>(j) / static_cast<double>(k - 1));
  }
  radii.back() = eps_min;
  return radii;
}

BallDensityProfile ball_profile(std::span<const Point> points, Point center, double eps_max,
                                double eps_min, std::size_t k) {
  BallDensityProfile prof;
  prof.center = center;
  prof.n = points.size();
  prof.radii = geometric_radii(eps_max, eps_min, k);
  const BallCounter counter(points, eps_min);
  for (double eps : prof.radii) {
    const std::size_t c = counter.count(center, eps);
    prof.counts.push_back(c);
    prof.densities.push_back(static_cast<double>(c) / static_cast<double>(prof.n) /
                             (std::numbers::pi * eps * eps));
  }
  return prof;
}

ScalingEstimate scaling_exponent(const BallDensityProfile& profile, std::size_t min_count) {
  std::vector<double> lx, ly;
  ScalingEstimate est;
  est.center = profile.center;
  for (std::size_t j = 0; j < profile.radii.size(); ++j) {
    if (profile.counts[j] < min_count) continue;
    est.radii_used.push_back(profile.radii[j]);
    lx.push_back(std::log(profile.radii[j]));
    ly.push_back(std::log(static_cast<double>(profile.counts[j]) /
                          static_cast<double>(profile.n)));
  }
  if (lx.size() < 4) {
    std::ostringstream os;
    os << "only " << lx.size() << " radii hold at least " << min_count << " points";
    fail(ErrorCode::InsufficientRadii, os.str());
  }
  const double m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  est.s_hat = sxy / sxx;
  est.fit_r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return est;
}

ScalingEstimate scaling_exponent(std::span<const Point> points, Point center, double eps_max,
                                 double eps_min, std::size_t k, std::size_t min_count) {
  return scaling_exponent(ball_profile(points, center, eps_max, eps_min, k), min_count);
}

double weierstrass_eval(const WeierstrassCurve& curve, double x) {
  if (curve.n_terms < 1) fail(ErrorCode::InvalidArgument, "n_terms must be >= 1");
  if (curve.n_terms > 33) {
    // 3^n stops being exact in a double beyond n = 33.
    fail(ErrorCode::InvalidArgument, "n_terms must be <= 33");
  }
  if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "x must be finite");
  double sum = 0.0;
  double pow3 = 1.0, half = 1.0;
  for (int n = 1; n <= curve.n_terms; ++n) {
    pow3 *= 3.0;
    half *= 0.5;
    const double hi = pow3 * x;
    const double lo = std::fma(pow3, x, -hi);
    double frac = (hi - std::floor(hi)) + lo;
    frac -= std::floor(frac);
    sum += half * std::cos(2.0 * std::numbers::pi * frac);
  }
  return sum;
}

std::vector<Point> weierstrass_grid(const WeierstrassCurve& curve, std::size_t n_points) {
  if (n_points < 2) fail(ErrorCode::InvalidArgument, "n_points must be >= 2");
  std::vector<Point> out(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = 0.5 * static_cast<double>(i) / static_cast<double>(n_points - 1);
    out[i] = {x, weierstrass_eval(curve, x)};
  }
  return out;
}

std::vector<Point> sample_weierstrass_graph(const WeierstrassCurve& curve, std::size_t n,
                                            std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 0.5);
  std::vector<Point> out(n);
  for (auto& p : out) {
    p.x = unit(rng);
    p.y = weierstrass_eval(curve, p.x);
  }
  return out;
}

}  // namespace liftscale
