#include "liftscale/infomeasure.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "liftscale/error.hpp"
#include "liftscale/lift.hpp"

namespace liftscale {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const double kLogPi = std::log(std::numbers::pi);
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

MiReport integrate_log_lift(const std::function<double(double, double)>& f, const Box& box,
                            const MiOptions& options,
                            const std::function<MiReport()>& fallback) {
  numerics::QuadratureOptions q;
  q.abs_tol = 0.01 * options.max_abs_error;
  q.rel_tol = 1e-9;
  q.max_evals = options.max_evals;
  const auto r = numerics::integrate_2d(f, box, q);
  if (r.abs_error > options.max_abs_error) {
    if (options.monte_carlo_fallback && fallback) return fallback();
    std::ostringstream os;
    os << "error estimate " << r.abs_error << " after " << r.n_evals << " evaluations";
    fail(ErrorCode::QuadratureNotConverged, os.str());
  }
  return {r.value, MiMethod::Quadrature, r.abs_error, r.n_evals};
}

// Log of the lift along branch n, skipping the smallest-index tie-break
// (a null set under rho_X).
double branch_log_lift(const CurveSingularJoint& dist, const CurveBranch& br, double x) {
  const double y = br.phi(x);
  const double ry = dist.marginal_y(y);
  if (!(ry >= 1e-300)) {
    std::ostringstream os;
    os << "rho_Y vanishes on the curve at (" << x << ", " << y << ")";
    fail(ErrorCode::UndefinedAtPoint, os.str());
  }
  const double d = br.dphi(x);
  return std::log(2.0 * br.weight / std::numbers::pi) - std::log(ry) -
         0.5 * std::log1p(d * d);
}

}  // namespace

std::string_view method_name(MiMethod method) noexcept {
  switch (method) {
    case MiMethod::ExactSum: return "ExactSum";
    case MiMethod::Quadrature: return "Quadrature";
    case MiMethod::ClosedForm: return "ClosedForm";
    case MiMethod::CurveQuadrature: return "CurveQuadrature";
    case MiMethod::MonteCarlo: return "MonteCarlo";
  }
  return "ExactSum";
}

MiReport mi_discrete(const DiscreteJoint& dist) {
  double total = 0.0;
  for (std::size_t i = 0; i < dist.nx(); ++i) {
    for (std::size_t j = 0; j < dist.ny(); ++j) {
      const double p = dist.p(i, j);
      if (p > 0.0) total += p * std::log(p / (dist.marginal_x()[i] * dist.marginal_y()[j]));
    }
  }
  return {total, MiMethod::ExactSum, 0.0, dist.nx() * dist.ny()};
}

MiReport mi_continuous(const ContinuousJoint& dist, const MiOptions& options) {
  const auto f = [&dist](double x, double y) {
    const double p = dist.density(x, y);
    if (!(p > 0.0)) return 0.0;
    const double mx = dist.marginal_x(x), my = dist.marginal_y(y);
    if (!(mx > 0.0) || !(my > 0.0)) return 0.0;
    return p * (std::log(p) - std::log(mx) - std::log(my));
  };
  const std::function<MiReport()> mc = [&]() {
    if (!dist.box().finite()) {
      fail(ErrorCode::QuadratureNotConverged,
           "quadrature budget exhausted and the box is too wide to sample");
    }
    return mi_monte_carlo(dist, options.monte_carlo_samples, options.seed);
  };
  return integrate_log_lift(f, dist.box(), options, mc);
}

MiReport mi_continuous(const NamedFamily& dist, const MiOptions& options) {
  const std::function<MiReport()> mc = [&]() {
    return mi_monte_carlo(dist, options.monte_carlo_samples, options.seed);
  };
  const Box box = default_box(dist);
  return std::visit(
      Overloaded{
          [&](const BivariateNormal& b) {
            const double r = b.r;
            const double s2 = 1.0 - r * r;
            const double log_c = -0.5 * std::log(s2);
            const auto f = [r, s2, log_c](double x, double y) {
              const double q = (x * x + y * y - 2.0 * r * x * y) / (2.0 * s2);
              const double p = std::exp(-q) / (2.0 * std::numbers::pi * std::sqrt(s2));
              if (p == 0.0) return 0.0;
              return p * (log_c - q + 0.5 * (x * x + y * y));
            };
            return integrate_log_lift(f, box, options, mc);
          },
          [&](const CircularCauchy&) {
            const auto f = [](double x, double y) {
              const double q = 1.0 + x * x + y * y;
              const double p = 1.0 / (2.0 * std::numbers::pi * q * std::sqrt(q));
              if (p == 0.0) return 0.0;
              const double log_l = -kLog2Pi - 1.5 * std::log(q) + 2.0 * kLogPi +
                                   std::log1p(x * x) + std::log1p(y * y);
              return p * log_l;
            };
            return integrate_log_lift(f, box, options, mc);
          },
          [&](const IndependentProduct& p) {
            return mi_continuous(as_continuous(NamedFamily{p}), options);
          },
      },
      dist);
}

MiReport mi_bvn_closed_form(double r) {
  if (!(std::abs(r) < 1.0)) {
    fail(ErrorCode::DegenerateCorrelation, "correlation must satisfy |r| < 1");
  }
  return {-0.5 * std::log1p(-r * r), MiMethod::ClosedForm, 0.0, 0};
}

MiReport mi_curve(const CurveSingularJoint& dist) {
  std::size_t evals = 0;
  const auto& branches = dist.branches();
  const auto f = [&](double x) {
    ++evals;
    const double rx = dist.marginal_x(x);
    if (rx == 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& br : branches) {
      if (br.weight == 0.0) continue;
      acc += br.weight * branch_log_lift(dist, br, x);
    }
    return rx * acc;
  };
  numerics::QuadratureOptions q;
  q.abs_tol = 1e-11;
  q.rel_tol = 1e-10;
  q.max_evals = std::size_t{1} << 18;
  const auto r = numerics::integrate_1d(f, dist.support_lo(), dist.support_hi(), q);
  if (!r.converged && r.abs_error > 1e-6) {
    std::ostringstream os;
    os << "curve quadrature error estimate " << r.abs_error;
    fail(ErrorCode::QuadratureNotConverged, os.str());
  }
  return {r.value, MiMethod::CurveQuadrature, r.abs_error, evals};
}

MiReport mi_monte_carlo(const JointDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "Monte Carlo needs at least 2 draws");
  const auto pts = sample(dist, n, seed);
  const auto log_lift = [&](const Point& p) -> double {
    return std::visit(
        Overloaded{
            [&](const DiscreteJoint& d) {
              const std::size_t i = *d.x_index(p.x), j = *d.y_index(p.y);
              return std::log(d.p(i, j) / (d.marginal_x()[i] * d.marginal_y()[j]));
            },
            [&](const ContinuousJoint& c) { return std::log(continuous_lift_at(c, p.x, p.y)); },
            [&](const NamedFamily& f) { return std::log(continuous_lift_at(f, p.x, p.y)); },
            [&](const CurveSingularJoint& c) { return std::log(curve_lift_at(c, p.x, p.y)); },
        },
        dist);
  };
  // Welford running mean and variance.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double v = log_lift(pts[k]);
    if (!std::isfinite(v)) {
      fail(ErrorCode::UndefinedAtPoint, "log lift is not finite at a sampled point");
    }
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, MiMethod::MonteCarlo, std::sqrt(var / static_cast<double>(n)), n};
}

MiReport mutual_information(const JointDistribution& dist, const MiOptions& options) {
  return std::visit(
      Overloaded{
          [&](const DiscreteJoint& d) { return mi_discrete(d); },
          [&](const ContinuousJoint& c) { return mi_continuous(c, options); },
          [&](const NamedFamily& f) {
            if (const auto* b = std::get_if<BivariateNormal>(&f)) return mi_bvn_closed_form(b->r);
            return mi_continuous(f, options);
          },
          [&](const CurveSingularJoint& c) { return mi_curve(c); },
      },
      dist);
}

std::vector<CounterexampleRow> convergence_counterexample(const std::vector<double>& r_schedule) {
  for (std::size_t k = 1; k < r_schedule.size(); ++k) {
    if (!(r_schedule[k - 1] < r_schedule[k])) {
      fail(ErrorCode::InvalidArgument, "correlation schedule must be strictly increasing");
    }
  }
  const auto limit = CurveSingularJoint::from_marginal(Univariate::normal(0.0, 1.0),
                                                       {linear_branch(1.0, 0.0)});
  const double limit_mi = mi_curve(limit).value;
  std::vector<CounterexampleRow> rows;
  for (double r : r_schedule) {
    const double mi = mi_bvn_closed_form(r).value;
    rows.push_back({r, mi, limit_mi, mi > limit_mi});
  }
  rows.push_back({1.0, limit_mi, limit_mi, false});
  return rows;
}

}  // namespace liftscale
