#include "liftscale/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "liftscale/error.hpp"

namespace liftscale {

namespace {

constexpr double kMassTol = 1e-12;
constexpr std::size_t kProbeGrid = 1024;
constexpr std::size_t kSamplerPoints = 4096;

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) return false;
  }
  return true;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double bvn_cdf(double r, double x, double y) {
  if (x == -std::numeric_limits<double>::infinity() || y == -std::numeric_limits<double>::infinity())
    return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return numerics::normal_cdf(y);
  if (y == std::numeric_limits<double>::infinity()) return numerics::normal_cdf(x);
  // Integrate along the axis with the smaller upper limit.
  if (y < x) std::swap(x, y);
  const double s = std::sqrt(1.0 - r * r);
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-13;
  opt.max_evals = std::size_t{1} << 16;
  const auto f = [&](double t) { return numerics::normal_pdf(t) * numerics::normal_cdf((y - r * t) / s); };
  return numerics::integrate_1d(f, -std::numeric_limits<double>::infinity(), x, opt).value;
}

double circular_cauchy_density(double x, double y) {
  const double q = 1.0 + x * x + y * y;
  return 1.0 / (2.0 * std::numbers::pi * q * std::sqrt(q));
}

double circular_cauchy_cdf(double x, double y) {
  if (std::isinf(x) || std::isinf(y)) {
    if (x == -std::numeric_limits<double>::infinity() || y == -std::numeric_limits<double>::infinity())
      return 0.0;
    const double other = std::isinf(x) ? y : x;
    return std::isinf(other) ? 1.0 : 0.5 + std::atan(other) / std::numbers::pi;
  }
  const double c = x * y / std::sqrt((1.0 + x * x) * (1.0 + y * y));
  return 0.25 + (std::atan(x) + std::atan(y) + std::asin(c)) / (2.0 * std::numbers::pi);
}

double standard_cauchy_pdf(double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); }
double standard_cauchy_cdf(double x) { return 0.5 + std::atan(x) / std::numbers::pi; }

std::vector<MonotonePiece> decompose_branch(const CurveBranch& br, double a, double b) {
  std::vector<double> cuts{a};
  if (!br.breakpoints.empty()) {
    std::vector<double> bp = br.breakpoints;
    std::sort(bp.begin(), bp.end());
    for (double p : bp) {
      if (p > a && p < b) cuts.push_back(p);
    }
  } else {
    const double h = (b - a) / static_cast<double>(kProbeGrid - 1);
    int last_sign = 0;
    double last_x = a;
    for (std::size_t i = 0; i < kProbeGrid; ++i) {
      const double x = (i + 1 == kProbeGrid) ? b : a + h * static_cast<double>(i);
      const double d = br.dphi(x);
      const int s = (d > 0.0) - (d < 0.0);
      if (s == 0) continue;
      if (last_sign != 0 && s != last_sign) {
        const double c = numerics::bisect_sign_change(br.dphi, last_x, x);
        if (c > cuts.back() && c < b) cuts.push_back(c);
      }
      last_sign = s;
      last_x = x;
    }
  }
  cuts.push_back(b);

  std::vector<MonotonePiece> pieces;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    MonotonePiece p;
    p.lo = cuts[k];
    p.hi = cuts[k + 1];
    constexpr int kPieceProbes = 65;
    bool pos = false, neg = false;
    for (int i = 0; i < kPieceProbes; ++i) {
      const double x = p.lo + (p.hi - p.lo) * (i + 0.5) / kPieceProbes;
      const double d = br.dphi(x);
      pos = pos || d > 0.0;
      neg = neg || d < 0.0;
    }
    if (pos && neg) {
      std::ostringstream os;
      os << "derivative changes sign inside piece [" << p.lo << ", " << p.hi << "]";
      fail(ErrorCode::NonMonotonePiece, os.str());
    }
    p.direction = pos ? 1 : (neg ? -1 : 0);
    const double f_lo = br.phi(p.lo), f_hi = br.phi(p.hi);
    p.phi_min = std::min(f_lo, f_hi);
    p.phi_max = std::max(f_lo, f_hi);
    pieces.push_back(p);
  }
  return pieces;
}

void check_derivative(const CurveBranch& br, double a, double b) {
  constexpr int kProbes = 16;
  for (int i = 0; i < kProbes; ++i) {
    const double x = a + (b - a) * (i + 0.5) / kProbes;
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    const double fd = (br.phi(x + h) - br.phi(x - h)) / (2.0 * h);
    const double d = br.dphi(x);
    if (!(std::abs(fd - d) <= 1e-5 * std::max(1.0, std::abs(d)))) {
      std::ostringstream os;
      os << "dphi disagrees with finite difference of phi at x=" << x << " (" << d << " vs " << fd
         << ")";
      fail(ErrorCode::InvalidDistribution, os.str());
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteJoint

DiscreteJoint::DiscreteJoint(std::vector<double> x_support, std::vector<double> y_support,
                             std::vector<double> pmf)
    : x_support_(std::move(x_support)), y_support_(std::move(y_support)), pmf_(std::move(pmf)) {
  if (x_support_.empty() || y_support_.empty()) {
    fail(ErrorCode::InvalidDistribution, "discrete joint needs non-empty supports");
  }
  if (!strictly_increasing(x_support_) || !strictly_increasing(y_support_)) {
    fail(ErrorCode::InvalidDistribution, "support labels must be sorted and distinct");
  }
  if (pmf_.size() != x_support_.size() * y_support_.size()) {
    fail(ErrorCode::InvalidDistribution, "pmf shape does not match supports");
  }
  double total = 0.0;
  for (double v : pmf_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::InvalidDistribution, "pmf entries must be finite and >= 0");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kMassTol) {
    std::ostringstream os;
    os.precision(17);
    os << "pmf sums to " << total << ", not 1";
    fail(ErrorCode::InvalidDistribution, os.str());
  }
  px_.assign(nx(), 0.0);
  py_.assign(ny(), 0.0);
  for (std::size_t i = 0; i < nx(); ++i) {
    for (std::size_t j = 0; j < ny(); ++j) {
      px_[i] += p(i, j);
      py_[j] += p(i, j);
    }
  }
}

DiscreteJoint DiscreteJoint::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    fail(ErrorCode::InvalidDistribution, "pmf matrix is empty");
  }
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) fail(ErrorCode::InvalidDistribution, "ragged pmf matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  std::vector<double> xs(rows.size()), ys(cols);
  std::iota(xs.begin(), xs.end(), 0.0);
  std::iota(ys.begin(), ys.end(), 0.0);
  return {std::move(xs), std::move(ys), std::move(flat)};
}

std::optional<std::size_t> DiscreteJoint::x_index(double label) const {
  const auto it = std::lower_bound(x_support_.begin(), x_support_.end(), label);
  if (it == x_support_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - x_support_.begin());
}

std::optional<std::size_t> DiscreteJoint::y_index(double label) const {
  const auto it = std::lower_bound(y_support_.begin(), y_support_.end(), label);
  if (it == y_support_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - y_support_.begin());
}

// ---------------------------------------------------------------------------
// ContinuousJoint

ContinuousJoint::ContinuousJoint(Density2 joint, Density1 marginal_x, Density1 marginal_y, Box box)
    : joint_(std::move(joint)), mx_(std::move(marginal_x)), my_(std::move(marginal_y)), box_(box) {
  if (!joint_ || !mx_ || !my_) fail(ErrorCode::InvalidDistribution, "missing density evaluator");
  if (!(box_.x_lo < box_.x_hi) || !(box_.y_lo < box_.y_hi)) {
    fail(ErrorCode::InvalidDistribution, "integration box is empty");
  }
}

ContinuousJoint& ContinuousJoint::with_cdfs(Density2 joint_cdf, Density1 cdf_x, Density1 cdf_y) {
  joint_cdf_ = std::move(joint_cdf);
  cdf_x_ = std::move(cdf_x);
  cdf_y_ = std::move(cdf_y);
  return *this;
}

double ContinuousJoint::cdf_x(double x) const {
  if (cdf_x_) return cdf_x_(x);
  if (x <= box_.x_lo) return 0.0;
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  opt.max_evals = std::size_t{1} << 18;
  return numerics::integrate_1d(mx_, box_.x_lo, std::min(x, box_.x_hi), opt).value;
}

double ContinuousJoint::cdf_y(double y) const {
  if (cdf_y_) return cdf_y_(y);
  if (y <= box_.y_lo) return 0.0;
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  opt.max_evals = std::size_t{1} << 18;
  return numerics::integrate_1d(my_, box_.y_lo, std::min(y, box_.y_hi), opt).value;
}

double ContinuousJoint::joint_cdf(double x, double y) const {
  if (joint_cdf_) return joint_cdf_(x, y);
  if (x <= box_.x_lo || y <= box_.y_lo) return 0.0;
  Box sub{box_.x_lo, std::min(x, box_.x_hi), box_.y_lo, std::min(y, box_.y_hi)};
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-10;
  opt.max_evals = std::size_t{1} << 20;
  return numerics::integrate_2d(joint_, sub, opt).value;
}

void ContinuousJoint::validate() const {
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-9;
  opt.rel_tol = 1e-9;
  opt.max_evals = std::size_t{1} << 20;
  const double mass = numerics::integrate_2d(joint_, box_, opt).value;
  if (std::abs(mass - 1.0) > 1e-4) {
    std::ostringstream os;
    os << "joint density integrates to " << mass << " over the box";
    fail(ErrorCode::InvalidDistribution, os.str());
  }
  const auto probe = [&](double t) {
    if (std::isfinite(box_.x_lo) && std::isfinite(box_.x_hi)) {
      return box_.x_lo + (box_.x_hi - box_.x_lo) * t;
    }
    return std::clamp(4.0 * t - 2.0, box_.x_lo, box_.x_hi);
  };
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double x = probe(t);
    const auto section = [&](double y) { return joint_(x, y); };
    const double m = numerics::integrate_1d(section, box_.y_lo, box_.y_hi, opt).value;
    if (std::abs(m - mx_(x)) > 1e-4) {
      std::ostringstream os;
      os << "marginal_x(" << x << ")=" << mx_(x) << " but y-marginalization gives " << m;
      fail(ErrorCode::InvalidDistribution, os.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Named families

BivariateNormal::BivariateNormal(double correlation) : r(correlation) {
  if (!(std::abs(correlation) < 1.0)) {
    fail(ErrorCode::DegenerateCorrelation, "correlation must satisfy |r| < 1");
  }
}

double bvn_density(double r, double x, double y) {
  if (!(std::abs(r) < 1.0)) {
    fail(ErrorCode::DegenerateCorrelation, "correlation must satisfy |r| < 1");
  }
  const double s2 = 1.0 - r * r;
  const double q = (x * x + y * y - 2.0 * r * x * y) / (2.0 * s2);
  return std::exp(-q) / (2.0 * std::numbers::pi * std::sqrt(s2));
}

Box default_box(const NamedFamily& family) {
  return std::visit(
      Overloaded{
          [](const BivariateNormal&) { return Box{-12.0, 12.0, -12.0, 12.0}; },
          [](const CircularCauchy&) { return Box::plane(); },
          [](const IndependentProduct& p) {
            return Box{p.x.effective_lo(), p.x.effective_hi(), p.y.effective_lo(),
                       p.y.effective_hi()};
          },
      },
      family);
}

ContinuousJoint as_continuous(const NamedFamily& family) {
  const Box box = default_box(family);
  return std::visit(
      Overloaded{
          [&](const BivariateNormal& b) {
            const double r = b.r;
            ContinuousJoint cj([r](double x, double y) { return bvn_density(r, x, y); },
                               numerics::normal_pdf, numerics::normal_pdf, box);
            cj.with_cdfs([r](double x, double y) { return bvn_cdf(r, x, y); },
                         numerics::normal_cdf, numerics::normal_cdf);
            return cj;
          },
          [&](const CircularCauchy&) {
            ContinuousJoint cj(circular_cauchy_density, standard_cauchy_pdf, standard_cauchy_pdf,
                               box);
            cj.with_cdfs(circular_cauchy_cdf, standard_cauchy_cdf, standard_cauchy_cdf);
            return cj;
          },
          [&](const IndependentProduct& p) {
            const Univariate ux = p.x, uy = p.y;
            ContinuousJoint cj([ux, uy](double x, double y) { return ux.pdf(x) * uy.pdf(y); },
                               [ux](double x) { return ux.pdf(x); },
                               [uy](double y) { return uy.pdf(y); }, box);
            cj.with_cdfs([ux, uy](double x, double y) { return ux.cdf(x) * uy.cdf(y); },
                         [ux](double x) { return ux.cdf(x); },
                         [uy](double y) { return uy.cdf(y); });
            return cj;
          },
      },
      family);
}

std::string family_name(const NamedFamily& family) {
  return std::visit(Overloaded{
                        [](const BivariateNormal& b) {
                          std::ostringstream os;
                          os << "bvn(r=" << b.r << ")";
                          return os.str();
                        },
                        [](const CircularCauchy&) { return std::string("cauchy-circular"); },
                        [](const IndependentProduct& p) {
                          return "independent(" + p.x.describe() + "," + p.y.describe() + ")";
                        },
                    },
                    family);
}

// ---------------------------------------------------------------------------
// CurveSingularJoint

CurveBranch linear_branch(double slope, double intercept, double weight) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {[slope, intercept](double x) { return slope * x + intercept; },
          [slope](double) { return slope; }, -inf, inf, weight, {}};
}

CurveBranch quadratic_branch(double a, double b, double c, double weight) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  CurveBranch br{[a, b, c](double x) { return (a * x + b) * x + c; },
                 [a, b](double x) { return 2.0 * a * x + b; }, -inf, inf, weight, {}};
  if (a != 0.0) br.breakpoints = {-b / (2.0 * a)};
  return br;
}

CurveSingularJoint::CurveSingularJoint(Density1 marginal_x, double support_lo, double support_hi,
                                       std::vector<CurveBranch> branches,
                                       std::optional<Density1> marginal_y)
    : mx_(std::move(marginal_x)),
      lo_(support_lo),
      hi_(support_hi),
      branches_(std::move(branches)),
      my_(std::move(marginal_y)) {
  if (!mx_) fail(ErrorCode::InvalidDistribution, "missing rho_X evaluator");
  if (!(std::isfinite(lo_) && std::isfinite(hi_) && lo_ < hi_)) {
    fail(ErrorCode::InvalidDistribution, "rho_X support must be a finite interval");
  }
  if (branches_.empty()) fail(ErrorCode::InvalidDistribution, "at least one branch is required");
  if (my_ && !*my_) my_.reset();

  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  opt.max_evals = std::size_t{1} << 18;
  const double mass = numerics::integrate_1d(mx_, lo_, hi_, opt).value;
  if (std::abs(mass - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "rho_X integrates to " << mass << " over its support";
    fail(ErrorCode::InvalidDistribution, os.str());
  }

  double wsum = 0.0;
  for (const auto& br : branches_) {
    if (!br.phi || !br.dphi) fail(ErrorCode::InvalidDistribution, "branch needs phi and dphi");
    if (!(br.weight >= 0.0 && br.weight <= 1.0)) {
      fail(ErrorCode::InvalidDistribution, "branch weight outside [0,1]");
    }
    if (br.domain_lo > lo_ || br.domain_hi < hi_) {
      fail(ErrorCode::InvalidDistribution, "branch domain must contain the support of rho_X");
    }
    wsum += br.weight;
  }
  if (std::abs(wsum - 1.0) > kMassTol) {
    fail(ErrorCode::InvalidDistribution, "branch weights must sum to 1");
  }

  image_lo_ = std::numeric_limits<double>::infinity();
  image_hi_ = -std::numeric_limits<double>::infinity();
  for (const auto& br : branches_) {
    check_derivative(br, lo_, hi_);
    pieces_.push_back(decompose_branch(br, lo_, hi_));
    if (br.weight > 0.0) {
      for (const auto& p : pieces_.back()) {
        image_lo_ = std::min(image_lo_, p.phi_min);
        image_hi_ = std::max(image_hi_, p.phi_max);
      }
    }
  }
  sampler_ = numerics::TabulatedInverseCdf(mx_, lo_, hi_, kSamplerPoints);
}

CurveSingularJoint CurveSingularJoint::from_marginal(const Univariate& x,
                                                     std::vector<CurveBranch> branches) {
  const double lo = x.effective_lo(), hi = x.effective_hi();
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    fail(ErrorCode::InvalidDistribution, "curve-singular X-marginal needs light tails");
  }
  return {[x](double t) { return x.pdf(t); }, lo, hi, std::move(branches)};
}

double CurveSingularJoint::marginal_y(double y) const {
  if (my_) return (*my_)(y);
  return derive_pushforward_density(*this, y);
}

double CurveSingularJoint::cdf_x(double x) const {
  if (x <= lo_) return 0.0;
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-12;
  opt.max_evals = std::size_t{1} << 18;
  return numerics::integrate_1d(mx_, lo_, std::min(x, hi_), opt).value;
}

double CurveSingularJoint::branch_mass_below(std::size_t n, double x_max, double y) const {
  const CurveBranch& br = branches_[n];
  const auto g = [&](double x) { return br.phi(x) - y; };
  double mass = 0.0;
  for (const auto& p : pieces_[n]) {
    double a = p.lo, b = p.hi;
    if (y >= p.phi_max) {
      // whole piece
    } else if (y < p.phi_min || p.direction == 0) {
      continue;
    } else {
      const double root = numerics::find_root_bracketed(g, br.dphi, p.lo, p.hi);
      if (p.direction > 0) {
        b = root;
      } else {
        a = root;
      }
    }
    b = std::min(b, x_max);
    if (b > a) mass += cdf_x(b) - cdf_x(a);
  }
  return mass;
}

double CurveSingularJoint::joint_cdf(double x, double y) const {
  double total = 0.0;
  for (std::size_t n = 0; n < branches_.size(); ++n) {
    if (branches_[n].weight == 0.0) continue;
    total += branches_[n].weight * branch_mass_below(n, x, y);
  }
  return total;
}

double CurveSingularJoint::cdf_y(double y) const {
  return joint_cdf(std::numeric_limits<double>::infinity(), y);
}

double derive_pushforward_density(const CurveSingularJoint& dist, double y) {
  double total = 0.0;
  const auto& branches = dist.branches();
  for (std::size_t n = 0; n < branches.size(); ++n) {
    const CurveBranch& br = branches[n];
    if (br.weight == 0.0) continue;
    const auto& pieces = dist.pieces(n);
    const auto g = [&](double x) { return br.phi(x) - y; };
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const MonotonePiece& p = pieces[k];
      if (y < p.phi_min || y > p.phi_max) continue;
      if (p.direction == 0) {
        fail(ErrorCode::DerivativeVanishes, "y lies on a flat piece of a branch");
      }
      // Half-open pieces: a root on a shared endpoint belongs to the later piece.
      if (k + 1 < pieces.size() && br.phi(p.hi) == y) continue;
      const double root = numerics::find_root_bracketed(g, br.dphi, p.lo, p.hi);
      const double slope = std::abs(br.dphi(root));
      if (slope < 1e-12) {
        std::ostringstream os;
        os << "|phi'| vanishes at preimage x=" << root << " of y=" << y;
        fail(ErrorCode::DerivativeVanishes, os.str());
      }
      total += br.weight * dist.marginal_x(root) / slope;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Evaluation and sampling

double density_at(const JointDistribution& dist, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    fail(ErrorCode::InvalidArgument, "point must be finite");
  }
  return std::visit(
      Overloaded{
          [&](const DiscreteJoint& d) {
            const auto i = d.x_index(x);
            const auto j = d.y_index(y);
            if (!i || !j) fail(ErrorCode::OutOfSupport, "label not in discrete support");
            return d.p(*i, *j);
          },
          [&](const ContinuousJoint& c) { return c.density(x, y); },
          [&](const NamedFamily& f) {
            return std::visit(Overloaded{
                                  [&](const BivariateNormal& b) { return bvn_density(b.r, x, y); },
                                  [&](const CircularCauchy&) { return circular_cauchy_density(x, y); },
                                  [&](const IndependentProduct& p) { return p.x.pdf(x) * p.y.pdf(y); },
                              },
                              f);
          },
          [&](const CurveSingularJoint&) -> double {
            fail(ErrorCode::CurveSingularHasNoDensity,
                 "curve-singular laws have no density w.r.t. area measure");
          },
      },
      dist);
}

std::vector<Point> sample_continuous(const ContinuousJoint& dist, std::size_t n,
                                     std::uint64_t seed) {
  const Box& box = dist.box();
  if (!box.finite()) {
    fail(ErrorCode::InvalidArgument, "generic continuous sampling needs a finite box");
  }
  constexpr std::size_t kNodes = 512;
  constexpr std::size_t kYPoints = 1024;
  const numerics::TabulatedInverseCdf xs(
      [&](double x) { return dist.marginal_x(x); }, box.x_lo, box.x_hi, kSamplerPoints);
  const double hx = (box.x_hi - box.x_lo) / kNodes;
  std::vector<std::optional<numerics::TabulatedInverseCdf>> cond(kNodes);
  for (std::size_t k = 0; k < kNodes; ++k) {
    const double xk = box.x_lo + hx * (static_cast<double>(k) + 0.5);
    try {
      cond[k].emplace([&](double y) { return dist.density(xk, y); }, box.y_lo, box.y_hi, kYPoints);
    } catch (const Error&) {
      cond[k].reset();
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs.quantile(unit(rng));
    auto k = static_cast<std::ptrdiff_t>(std::clamp((x - box.x_lo) / hx, 0.0, kNodes - 1.0));
    // nearest node with mass
    std::ptrdiff_t best = -1;
    for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(kNodes) && best < 0; ++d) {
      for (std::ptrdiff_t c : {k - d, k + d}) {
        if (c >= 0 && c < static_cast<std::ptrdiff_t>(kNodes) && cond[c]) {
          best = c;
          break;
        }
      }
    }
    if (best < 0) fail(ErrorCode::InvalidDistribution, "joint density has no mass on the box");
    out.push_back({x, cond[best]->quantile(unit(rng))});
  }
  return out;
}

std::vector<Point> sample(const JointDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "sample size must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(n);
  std::visit(
      Overloaded{
          [&](const DiscreteJoint& d) {
            const auto& pmf = d.pmf();
            std::vector<double> cum(pmf.size());
            std::partial_sum(pmf.begin(), pmf.end(), cum.begin());
            const double total = cum.back();
            for (std::size_t i = 0; i < n; ++i) {
              const double u = unit(rng) * total;
              auto it = std::upper_bound(cum.begin(), cum.end(), u);
              if (it == cum.end()) --it;
              // skip zero-mass cells that share a cumulative value
              std::size_t k = static_cast<std::size_t>(it - cum.begin());
              while (pmf[k] == 0.0 && k + 1 < pmf.size()) ++k;
              out.push_back({d.x_support()[k / d.ny()], d.y_support()[k % d.ny()]});
            }
          },
          [&](const ContinuousJoint& c) { out = sample_continuous(c, n, seed); },
          [&](const NamedFamily& f) {
            std::visit(Overloaded{
                           [&](const BivariateNormal& b) {
                             std::normal_distribution<double> z(0.0, 1.0);
                             const double s = std::sqrt(1.0 - b.r * b.r);
                             for (std::size_t i = 0; i < n; ++i) {
                               const double z1 = z(rng);
                               const double z2 = z(rng);
                               out.push_back({z1, b.r * z1 + s * z2});
                             }
                           },
                           [&](const CircularCauchy&) {
                             // X standard Cauchy; Y | X = x has CDF
                             // (1 + y / sqrt(1 + x^2 + y^2)) / 2, inverted exactly.
                             for (std::size_t i = 0; i < n; ++i) {
                               const double x = std::tan(std::numbers::pi * (unit(rng) - 0.5));
                               double v = 2.0 * unit(rng) - 1.0;
                               while (v <= -1.0) v = 2.0 * unit(rng) - 1.0;
                               const double a = std::sqrt(1.0 + x * x);
                               out.push_back({x, v * a / std::sqrt(1.0 - v * v)});
                             }
                           },
                           [&](const IndependentProduct& p) {
                             for (std::size_t i = 0; i < n; ++i) {
                               const double x = p.x.draw(rng);
                               const double y = p.y.draw(rng);
                               out.push_back({x, y});
                             }
                           },
                       },
                       f);
          },
          [&](const CurveSingularJoint& c) {
            const auto& br = c.branches();
            std::vector<double> cum(br.size());
            double acc = 0.0;
            for (std::size_t k = 0; k < br.size(); ++k) cum[k] = (acc += br[k].weight);
            for (std::size_t i = 0; i < n; ++i) {
              const double x = c.x_sampler().quantile(unit(rng));
              std::size_t k = 0;
              if (br.size() > 1) {
                const double u = unit(rng) * acc;
                k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
                k = std::min(k, br.size() - 1);
                while (br[k].weight == 0.0 && k + 1 < br.size()) ++k;
              }
              out.push_back({x, br[k].phi(x)});
            }
          },
      },
      dist);
  return out;
}

}  // namespace liftscale
