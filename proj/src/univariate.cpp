#include "liftscale/univariate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "liftscale/error.hpp"
#include "liftscale/numerics.hpp"

namespace liftscale {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Normal tails beyond 10 sd hold < 1.6e-23 of mass.
constexpr double kNormalReach = 10.0;
// Exponential tail beyond 50/rate holds e^-50 ~ 2e-22.
constexpr double kExpReach = 50.0;
}  // namespace

Univariate Univariate::normal(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(mean) || !std::isfinite(sd)) {
    fail(ErrorCode::InvalidDistribution, "normal needs a finite mean and sd > 0");
  }
  return {Kind::Normal, mean, sd};
}

Univariate Univariate::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    fail(ErrorCode::InvalidDistribution, "uniform needs finite lo < hi");
  }
  return {Kind::Uniform, lo, hi};
}

Univariate Univariate::cauchy(double location, double scale) {
  if (!(scale > 0.0) || !std::isfinite(location) || !std::isfinite(scale)) {
    fail(ErrorCode::InvalidDistribution, "cauchy needs a finite location and scale > 0");
  }
  return {Kind::Cauchy, location, scale};
}

Univariate Univariate::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    fail(ErrorCode::InvalidDistribution, "exponential needs rate > 0");
  }
  return {Kind::Exponential, rate, 0.0};
}

double Univariate::pdf(double x) const {
  switch (kind_) {
    case Kind::Normal: return numerics::normal_pdf((x - a_) / b_) / b_;
    case Kind::Uniform: return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
    case Kind::Cauchy: {
      const double z = (x - a_) / b_;
      return 1.0 / (std::numbers::pi * b_ * (1.0 + z * z));
    }
    case Kind::Exponential: return x >= 0.0 ? a_ * std::exp(-a_ * x) : 0.0;
  }
  return 0.0;
}

double Univariate::cdf(double x) const {
  switch (kind_) {
    case Kind::Normal: return numerics::normal_cdf((x - a_) / b_);
    case Kind::Uniform:
      if (x <= a_) return 0.0;
      if (x >= b_) return 1.0;
      return (x - a_) / (b_ - a_);
    case Kind::Cauchy: return 0.5 + std::atan((x - a_) / b_) / std::numbers::pi;
    case Kind::Exponential: return x > 0.0 ? -std::expm1(-a_ * x) : 0.0;
  }
  return 0.0;
}

double Univariate::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) fail(ErrorCode::InvalidArgument, "quantile level outside [0,1]");
  switch (kind_) {
    case Kind::Normal: {
      if (u <= 0.0) return -kInf;
      if (u >= 1.0) return kInf;
      // Bracket then Newton on the CDF.
      const auto f = [&](double x) { return cdf(x) - u; };
      const auto df = [&](double x) { return pdf(x); };
      return numerics::find_root_bracketed(f, df, a_ - 40.0 * b_, a_ + 40.0 * b_, 1e-14 * b_);
    }
    case Kind::Uniform: return a_ + u * (b_ - a_);
    case Kind::Cauchy: return a_ + b_ * std::tan(std::numbers::pi * (u - 0.5));
    case Kind::Exponential: return u >= 1.0 ? kInf : -std::log1p(-u) / a_;
  }
  return 0.0;
}

double Univariate::support_lo() const {
  switch (kind_) {
    case Kind::Uniform: return a_;
    case Kind::Exponential: return 0.0;
    default: return -kInf;
  }
}

double Univariate::support_hi() const {
  switch (kind_) {
    case Kind::Uniform: return b_;
    default: return kInf;
  }
}

double Univariate::effective_lo() const {
  switch (kind_) {
    case Kind::Normal: return a_ - kNormalReach * b_;
    case Kind::Cauchy: return -kInf;
    default: return support_lo();
  }
}

double Univariate::effective_hi() const {
  switch (kind_) {
    case Kind::Normal: return a_ + kNormalReach * b_;
    case Kind::Exponential: return kExpReach / a_;
    case Kind::Cauchy: return kInf;
    default: return support_hi();
  }
}

std::string Univariate::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Normal: os << "normal(" << a_ << "," << b_ << ")"; break;
    case Kind::Uniform: os << "uniform(" << a_ << "," << b_ << ")"; break;
    case Kind::Cauchy: os << "cauchy(" << a_ << "," << b_ << ")"; break;
    case Kind::Exponential: os << "exponential(" << a_ << ")"; break;
  }
  return os.str();
}

}  // namespace liftscale
