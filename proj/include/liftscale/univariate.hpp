#pragma once

#include <random>
#include <string>

namespace liftscale {

/// One-dimensional marginal law used by independent products and as the
/// X-marginal of curve-singular joints.
class Univariate {
 public:
  enum class Kind { Normal, Uniform, Cauchy, Exponential };

  static Univariate normal(double mean, double sd);
  static Univariate uniform(double lo, double hi);
  static Univariate cauchy(double location, double scale);
  static Univariate exponential(double rate);

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double u) const;

  /// Exact support; infinite ends where the law is unbounded.
  double support_lo() const;
  double support_hi() const;

  /// Finite interval holding all but a negligible (< 1e-20) tail, or the exact
  /// support when bounded. Heavy-tailed laws have no such interval.
  double effective_lo() const;
  double effective_hi() const;
  bool has_light_tails() const { return kind_ != Kind::Cauchy; }

  template <class Rng>
  double draw(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (kind_) {
      case Kind::Normal: {
        std::normal_distribution<double> n(a_, b_);
        return n(rng);
      }
      default: return quantile(unit(rng));
    }
  }

  std::string describe() const;

 private:
  Univariate(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

}  // namespace liftscale
