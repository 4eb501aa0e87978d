#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "liftscale/numerics.hpp"
#include "liftscale/univariate.hpp"

namespace liftscale {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Density1 = std::function<double(double)>;
using Density2 = std::function<double(double, double)>;

/// Joint law on a finite grid of real labels. pmf is stored row-major with
/// rows indexed by x labels.
class DiscreteJoint {
 public:
  DiscreteJoint(std::vector<double> x_support, std::vector<double> y_support,
                std::vector<double> pmf);

  /// Labels 0..rows-1 and 0..cols-1.
  static DiscreteJoint from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t nx() const { return x_support_.size(); }
  std::size_t ny() const { return y_support_.size(); }
  double p(std::size_t i, std::size_t j) const { return pmf_[i * ny() + j]; }

  const std::vector<double>& x_support() const { return x_support_; }
  const std::vector<double>& y_support() const { return y_support_; }
  const std::vector<double>& pmf() const { return pmf_; }
  const std::vector<double>& marginal_x() const { return px_; }
  const std::vector<double>& marginal_y() const { return py_; }

  std::optional<std::size_t> x_index(double label) const;
  std::optional<std::size_t> y_index(double label) const;

 private:
  std::vector<double> x_support_;
  std::vector<double> y_support_;
  std::vector<double> pmf_;
  std::vector<double> px_;
  std::vector<double> py_;
};

/// Absolutely continuous joint law given by evaluators. Optional CDF
/// evaluators replace quadrature when a closed form is known.
class ContinuousJoint {
 public:
  ContinuousJoint(Density2 joint, Density1 marginal_x, Density1 marginal_y, Box box);

  ContinuousJoint& with_cdfs(Density2 joint_cdf, Density1 cdf_x, Density1 cdf_y);

  double density(double x, double y) const { return joint_(x, y); }
  double marginal_x(double x) const { return mx_(x); }
  double marginal_y(double y) const { return my_(y); }
  const Box& box() const { return box_; }

  double joint_cdf(double x, double y) const;
  double cdf_x(double x) const;
  double cdf_y(double y) const;

  /// Throws InvalidDistribution unless the joint integrates to 1 over the box
  /// and marginal_x matches the numeric y-marginal at probe points (1e-4).
  void validate() const;

 private:
  Density2 joint_;
  Density1 mx_;
  Density1 my_;
  Box box_;
  Density2 joint_cdf_;
  Density1 cdf_x_;
  Density1 cdf_y_;
};

/// Standard bivariate normal (unit variances) with correlation r.
struct BivariateNormal {
  explicit BivariateNormal(double correlation);
  double r;
};

/// f(x, y) = 1 / (2 pi (1 + x^2 + y^2)^{3/2}); standard Cauchy marginals.
struct CircularCauchy {};

struct IndependentProduct {
  Univariate x;
  Univariate y;
};

using NamedFamily = std::variant<BivariateNormal, CircularCauchy, IndependentProduct>;

/// Evaluator view of a named family, carrying its closed-form CDFs.
ContinuousJoint as_continuous(const NamedFamily& family);

/// Default integration box of a named family; may be infinite.
Box default_box(const NamedFamily& family);

std::string family_name(const NamedFamily& family);

/// One smooth branch y = phi(x) carrying conditional weight a_n.
struct CurveBranch {
  Density1 phi;
  Density1 dphi;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  double weight = 1.0;
  /// Interior breakpoints of declared monotone pieces; empty means detect.
  std::vector<double> breakpoints;
};

/// y = slope * x + intercept on the whole line.
CurveBranch linear_branch(double slope, double intercept, double weight = 1.0);
/// y = a x^2 + b x + c on the whole line, split at the vertex.
CurveBranch quadratic_branch(double a, double b, double c, double weight = 1.0);

struct MonotonePiece {
  double lo = 0.0;
  double hi = 0.0;
  /// +1 increasing, -1 decreasing, 0 flat.
  int direction = 0;
  double phi_min = 0.0;
  double phi_max = 0.0;
};

/// Joint law concentrated on branch graphs {(x, phi_n(x))} with an absolutely
/// continuous X-marginal on a finite support interval.
class CurveSingularJoint {
 public:
  CurveSingularJoint(Density1 marginal_x, double support_lo, double support_hi,
                     std::vector<CurveBranch> branches,
                     std::optional<Density1> marginal_y = std::nullopt);

  static CurveSingularJoint from_marginal(const Univariate& x, std::vector<CurveBranch> branches);

  double marginal_x(double x) const { return mx_(x); }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::vector<CurveBranch>& branches() const { return branches_; }
  const std::vector<MonotonePiece>& pieces(std::size_t branch) const { return pieces_[branch]; }

  /// Supplied rho_Y, or the pushforward of rho_X through the branches.
  double marginal_y(double y) const;
  bool has_supplied_marginal_y() const { return my_.has_value(); }

  /// Range of Y over all branches.
  double image_lo() const { return image_lo_; }
  double image_hi() const { return image_hi_; }

  double cdf_x(double x) const;
  /// mu_X({x' <= x_max : phi_n(x') <= y}) summed over branches with weights.
  double joint_cdf(double x, double y) const;
  double cdf_y(double y) const;

  const numerics::TabulatedInverseCdf& x_sampler() const { return sampler_; }

 private:
  double branch_mass_below(std::size_t n, double x_max, double y) const;

  Density1 mx_;
  double lo_;
  double hi_;
  std::vector<CurveBranch> branches_;
  std::optional<Density1> my_;
  std::vector<std::vector<MonotonePiece>> pieces_;
  double image_lo_ = 0.0;
  double image_hi_ = 0.0;
  numerics::TabulatedInverseCdf sampler_;
};

using JointDistribution = std::variant<DiscreteJoint, ContinuousJoint, NamedFamily, CurveSingularJoint>;

/// Probability (discrete) or area density (absolutely continuous) at a point.
double density_at(const JointDistribution& dist, double x, double y);

double bvn_density(double r, double x, double y);

/// rho_Y(y) = sum_n sum_{x*: phi_n(x*) = y} a_n rho_X(x*) / |phi_n'(x*)|.
double derive_pushforward_density(const CurveSingularJoint& dist, double y);

/// Deterministic given seed.
std::vector<Point> sample(const JointDistribution& dist, std::size_t n, std::uint64_t seed);

/// Tabulated conditional sampler for a generic finite-box ContinuousJoint.
std::vector<Point> sample_continuous(const ContinuousJoint& dist, std::size_t n,
                                     std::uint64_t seed);

}  // namespace liftscale
