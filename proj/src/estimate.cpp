#include "liftscale/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "liftscale/error.hpp"
#include "liftscale/numerics.hpp"

namespace liftscale {

namespace {

constexpr double kCutoff = 7.0;

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

void check_grid(const std::vector<double>& g, const char* axis) {
  if (g.empty() || !strictly_increasing(g)) {
    fail(ErrorCode::InvalidArgument, std::string(axis) + " grid must be non-empty and increasing");
  }
}

// Gaussian KDE in 1D at each grid point from values sorted ascending.
std::vector<double> kde_1d(const std::vector<double>& sorted, const std::vector<double>& grid,
                           double h) {
  const double norm = numerics::kInvSqrt2Pi / (h * static_cast<double>(sorted.size()));
  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x - kCutoff * h);
    const auto end = std::upper_bound(it, sorted.end(), x + kCutoff * h);
    double acc = 0.0;
    for (; it != end; ++it) {
      const double z = (x - *it) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out[g] = acc * norm;
  }
  return out;
}

TargetingResult pick_discrete(const DiscreteJoint& d, double target_y) {
  const auto j = d.y_index(target_y);
  if (!j) fail(ErrorCode::OutOfSupport, "target label is not in the y support");
  const double py = d.marginal_y()[*j];
  if (!(py > 0.0)) fail(ErrorCode::TargetHasZeroMass, "target label has zero probability");

  TargetingResult res;
  res.target_lo = res.target_hi = target_y;
  res.baseline_rate = py;
  bool found = false;
  for (std::size_t i = 0; i < d.nx(); ++i) {
    const double px = d.marginal_x()[i];
    if (!(px > 0.0)) continue;
    const double lift = d.p(i, *j) / (px * py);
    if (!found || lift > res.lift_at_opt) {
      found = true;
      res.x_opt = d.x_support()[i];
      res.lift_at_opt = lift;
      res.boosted_rate = d.p(i, *j) / px;
    }
  }
  res.expected_extra_per_n = res.boosted_rate - res.baseline_rate;
  return res;
}

}  // namespace

ContingencyTable::ContingencyTable(std::vector<double> xl, std::vector<double> yl,
                                   std::vector<std::uint64_t> c)
    : x_labels(std::move(xl)), y_labels(std::move(yl)), counts(std::move(c)) {
  if (x_labels.empty() || y_labels.empty()) {
    fail(ErrorCode::InvalidArgument, "contingency table needs labels on both axes");
  }
  if (!strictly_increasing(x_labels) || !strictly_increasing(y_labels)) {
    fail(ErrorCode::InvalidArgument, "labels must be sorted and distinct");
  }
  if (counts.size() != x_labels.size() * y_labels.size()) {
    fail(ErrorCode::InvalidArgument, "count matrix shape does not match labels");
  }
  n = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (n < 1) fail(ErrorCode::InvalidArgument, "contingency table is empty");
}

ContingencyTable ContingencyTable::from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
  if (rows.empty() || rows.front().empty()) fail(ErrorCode::InvalidArgument, "empty count matrix");
  const std::size_t cols = rows.front().size();
  std::vector<std::uint64_t> flat;
  for (const auto& r : rows) {
    if (r.size() != cols) fail(ErrorCode::InvalidArgument, "ragged count matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  std::vector<double> xs(rows.size()), ys(cols);
  std::iota(xs.begin(), xs.end(), 0.0);
  std::iota(ys.begin(), ys.end(), 0.0);
  return {std::move(xs), std::move(ys), std::move(flat)};
}

ContingencyTable ContingencyTable::from_samples(std::span<const Point> samples) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "no samples");
  std::vector<double> xs, ys;
  for (const auto& p : samples) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorCode::InvalidArgument, "samples must be finite");
    }
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<std::uint64_t> c(xs.size() * ys.size(), 0);
  for (const auto& p : samples) {
    const auto i = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), p.x) - xs.begin());
    const auto j = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), p.y) - ys.begin());
    ++c[i * ys.size() + j];
  }
  return {std::move(xs), std::move(ys), std::move(c)};
}

DiscreteJoint ContingencyTable::to_joint(double smoothing) const {
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
    fail(ErrorCode::InvalidArgument, "smoothing must be >= 0");
  }
  const double total = static_cast<double>(n) + smoothing * static_cast<double>(counts.size());
  std::vector<double> pmf(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    pmf[k] = (static_cast<double>(counts[k]) + smoothing) / total;
  }
  return {x_labels, y_labels, std::move(pmf)};
}

LiftField empirical_discrete_lift(const ContingencyTable& table, double smoothing, double tol) {
  return discrete_lift(table.to_joint(smoothing), tol);
}

MiReport empirical_mi(const ContingencyTable& table, double smoothing) {
  return mi_discrete(table.to_joint(smoothing));
}

double silverman_bandwidth(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return 1.06 * sd * std::pow(n, -0.2);
}

KernelLiftEstimate kernel_lift(std::span<const Point> samples, const std::vector<double>& grid_x,
                               const std::vector<double>& grid_y, const Bandwidth& bandwidth,
                               double tol) {
  if (samples.size() < kMinKernelSample) {
    std::ostringstream os;
    os << "kernel lift needs n >= " << kMinKernelSample << ", got " << samples.size();
    fail(ErrorCode::MinSampleSize, os.str());
  }
  check_grid(grid_x, "x");
  check_grid(grid_y, "y");
  std::vector<double> xs, ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (const auto& p : samples) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorCode::InvalidArgument, "samples must be finite");
    }
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  if (*xmin == *xmax) fail(ErrorCode::DegenerateSample, "x has zero variance");
  if (*ymin == *ymax) fail(ErrorCode::DegenerateSample, "y has zero variance");

  KernelLiftEstimate est;
  est.n = samples.size();
  if (bandwidth.rule == Bandwidth::Rule::Silverman) {
    est.bandwidth_x = silverman_bandwidth(xs);
    est.bandwidth_y = silverman_bandwidth(ys);
  } else {
    est.bandwidth_x = bandwidth.h_x;
    est.bandwidth_y = bandwidth.h_y;
  }
  if (!(est.bandwidth_x > 0.0) || !(est.bandwidth_y > 0.0) || !std::isfinite(est.bandwidth_x) ||
      !std::isfinite(est.bandwidth_y)) {
    fail(ErrorCode::InvalidArgument, "bandwidths must be positive and finite");
  }
  const double hx = est.bandwidth_x, hy = est.bandwidth_y;

  std::vector<Point> by_x(samples.begin(), samples.end());
  std::sort(by_x.begin(), by_x.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const std::vector<double> fx = kde_1d(xs, grid_x, hx);
  const std::vector<double> fy = kde_1d(ys, grid_y, hy);

  const double norm = 1.0 / (2.0 * std::numbers::pi * hx * hy * static_cast<double>(est.n));
  LiftField& field = est.field;
  field.grid_x = grid_x;
  field.grid_y = grid_y;
  field.values.assign(grid_x.size() * grid_y.size(), std::numeric_limits<double>::quiet_NaN());
  field.labels.assign(field.values.size(), LiftLabel::Undefined);

  // For each x node: x-kernel weights of the points in its window, sorted by
  // y so each y node only visits its own window.
  std::vector<std::pair<double, double>> window;
  for (std::size_t i = 0; i < grid_x.size(); ++i) {
    const double x = grid_x[i];
    const auto lo = std::lower_bound(by_x.begin(), by_x.end(), x - kCutoff * hx,
                                     [](const Point& p, double v) { return p.x < v; });
    const auto hi = std::upper_bound(lo, by_x.end(), x + kCutoff * hx,
                                     [](double v, const Point& p) { return v < p.x; });
    window.clear();
    for (auto it = lo; it != hi; ++it) {
      const double z = (x - it->x) / hx;
      window.emplace_back(it->y, std::exp(-0.5 * z * z));
    }
    std::sort(window.begin(), window.end());
    for (std::size_t j = 0; j < grid_y.size(); ++j) {
      const double y = grid_y[j];
      auto it = std::lower_bound(window.begin(), window.end(),
                                 std::make_pair(y - kCutoff * hy, -1.0));
      double acc = 0.0;
      for (; it != window.end() && it->first <= y + kCutoff * hy; ++it) {
        const double z = (y - it->first) / hy;
        acc += it->second * std::exp(-0.5 * z * z);
      }
      const std::size_t k = i * grid_y.size() + j;
      const double denom = fx[i] * fy[j];
      if (!(denom > 0.0)) continue;
      field.values[k] = acc * norm / denom;
      field.labels[k] = classify(field.values[k], tol);
    }
  }
  return est;
}

double empirical_sibuya(std::span<const Point> samples, double x, double y) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "no samples");
  std::size_t f = 0, g = 0, h = 0;
  for (const auto& p : samples) {
    const bool bx = p.x <= x, by = p.y <= y;
    g += bx;
    h += by;
    f += bx && by;
  }
  if (g == 0 || h == 0) fail(ErrorCode::UndefinedAtPoint, "empirical marginal CDF is zero");
  const double n = static_cast<double>(samples.size());
  return (static_cast<double>(f) / n) /
         ((static_cast<double>(g) / n) * (static_cast<double>(h) / n));
}

TargetingResult target_profile(const DiscreteJoint& dist, double target_y) {
  return pick_discrete(dist, target_y);
}

TargetingResult target_profile(const ContingencyTable& table, double target_y) {
  return pick_discrete(table.to_joint(0.0), target_y);
}

TargetingResult target_profile(const ContinuousJoint& dist, double y_lo, double y_hi,
                               const std::vector<double>& x_grid) {
  if (!(y_lo < y_hi)) fail(ErrorCode::InvalidArgument, "target interval needs y_lo < y_hi");
  check_grid(x_grid, "x");
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-11;
  opt.max_evals = std::size_t{1} << 16;
  const auto my = [&](double y) { return dist.marginal_y(y); };
  const double baseline = numerics::integrate_1d(my, y_lo, y_hi, opt).value;
  if (!(baseline > 0.0)) fail(ErrorCode::TargetHasZeroMass, "target interval has zero mass");

  TargetingResult res;
  res.target_lo = y_lo;
  res.target_hi = y_hi;
  res.target_is_interval = true;
  res.baseline_rate = baseline;
  bool found = false;
  for (double x : x_grid) {
    const double mx = dist.marginal_x(x);
    if (!(mx > 0.0)) continue;
    const auto slice = [&](double y) { return dist.density(x, y); };
    const double joint = numerics::integrate_1d(slice, y_lo, y_hi, opt).value;
    const double boosted = joint / mx;
    const double lift = boosted / baseline;
    if (!found || lift > res.lift_at_opt) {
      found = true;
      res.x_opt = x;
      res.lift_at_opt = lift;
      res.boosted_rate = boosted;
    }
  }
  if (!found) fail(ErrorCode::UndefinedAtPoint, "rho_X vanishes on the whole profile grid");
  res.expected_extra_per_n = res.boosted_rate - res.baseline_rate;
  return res;
}

TargetingResult target_profile(const NamedFamily& dist, double y_lo, double y_hi,
                               const std::vector<double>& x_grid) {
  return target_profile(as_continuous(dist), y_lo, y_hi, x_grid);
}

}  // namespace liftscale
