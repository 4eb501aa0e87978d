#include "liftscale/lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "liftscale/error.hpp"

namespace liftscale {

namespace {

constexpr double kTinyMarginal = 1e-300;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void undefined_at(double x, double y, const char* why) {
  std::ostringstream os;
  os << why << " at (" << x << ", " << y << ")";
  fail(ErrorCode::UndefinedAtPoint, os.str());
}

void check_grid(const std::vector<double>& g, const char* axis) {
  if (g.empty()) fail(ErrorCode::InvalidArgument, std::string(axis) + " grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i - 1] < g[i])) {
      fail(ErrorCode::InvalidArgument, std::string(axis) + " grid must be strictly increasing");
    }
  }
}

double bvn_lift(double r, double x, double y) {
  const double s2 = 1.0 - r * r;
  const double q = (x * x + y * y - 2.0 * r * x * y) / (2.0 * s2);
  return std::exp(-q + 0.5 * (x * x + y * y)) / std::sqrt(s2);
}

double ratio_lift(double joint, double mx, double my, double x, double y) {
  if (!(mx >= kTinyMarginal) || !(my >= kTinyMarginal)) {
    undefined_at(x, y, "marginal density vanishes");
  }
  return joint / mx / my;
}

// NaN instead of throwing; used inside quadrature loops.
double lift_or_nan(const ContinuousJoint& c, double x, double y) {
  const double mx = c.marginal_x(x), my = c.marginal_y(y);
  if (!(mx >= kTinyMarginal) || !(my >= kTinyMarginal)) return kNaN;
  return c.density(x, y) / mx / my;
}

double cdf_ratio(double joint, double g, double h, double x, double y) {
  if (!(g > 0.0) || !(h > 0.0)) undefined_at(x, y, "marginal CDF is zero");
  return joint / (g * h);
}

}  // namespace

std::string_view label_name(LiftLabel label) noexcept {
  switch (label) {
    case LiftLabel::Lift: return "Lift";
    case LiftLabel::Inhibit: return "Inhibit";
    case LiftLabel::Neutral: return "Neutral";
    case LiftLabel::Zero: return "Zero";
    case LiftLabel::Undefined: return "Undefined";
  }
  return "Undefined";
}

LiftLabel classify(double value, double tol) {
  if (!std::isfinite(value) || value < 0.0) return LiftLabel::Undefined;
  if (value == 0.0) return LiftLabel::Zero;
  if (std::abs(value - 1.0) <= tol) return LiftLabel::Neutral;
  return value > 1.0 ? LiftLabel::Lift : LiftLabel::Inhibit;
}

LiftField discrete_lift(const DiscreteJoint& dist, double tol) {
  LiftField field;
  field.grid_x = dist.x_support();
  field.grid_y = dist.y_support();
  field.values.resize(dist.nx() * dist.ny());
  field.labels.resize(field.values.size());
  const auto& px = dist.marginal_x();
  const auto& py = dist.marginal_y();
  for (std::size_t i = 0; i < dist.nx(); ++i) {
    for (std::size_t j = 0; j < dist.ny(); ++j) {
      const std::size_t k = i * dist.ny() + j;
      const double denom = px[i] * py[j];
      if (denom == 0.0) {
        field.values[k] = kNaN;
        field.labels[k] = LiftLabel::Undefined;
        continue;
      }
      field.values[k] = dist.p(i, j) / denom;
      field.labels[k] = classify(field.values[k], tol);
    }
  }
  return field;
}

double continuous_lift_at(const ContinuousJoint& dist, double x, double y) {
  return ratio_lift(dist.density(x, y), dist.marginal_x(x), dist.marginal_y(y), x, y);
}

double continuous_lift_at(const NamedFamily& dist, double x, double y) {
  return std::visit(
      Overloaded{
          [&](const BivariateNormal& b) { return bvn_lift(b.r, x, y); },
          [&](const CircularCauchy& c) {
            return ratio_lift(density_at(NamedFamily{c}, x, y),
                              1.0 / (std::numbers::pi * (1.0 + x * x)),
                              1.0 / (std::numbers::pi * (1.0 + y * y)), x, y);
          },
          [&](const IndependentProduct& p) {
            const double mx = p.x.pdf(x), my = p.y.pdf(y);
            return ratio_lift(mx * my, mx, my, x, y);
          },
      },
      dist);
}

double curve_lift_at(const CurveSingularJoint& dist, double x, double y, double on_curve_tol) {
  if (x < dist.support_lo() || x > dist.support_hi()) return 0.0;
  const auto& branches = dist.branches();
  for (const auto& br : branches) {
    if (br.weight == 0.0) continue;
    const double yc = br.phi(x);
    if (std::abs(y - yc) > on_curve_tol) continue;
    const double ry = dist.marginal_y(yc);
    if (!(ry >= kTinyMarginal)) undefined_at(x, y, "rho_Y vanishes on the curve");
    const double d = br.dphi(x);
    return 2.0 * br.weight / (std::numbers::pi * ry * std::sqrt(1.0 + d * d));
  }
  return 0.0;
}

double sibuya_omega_at(const JointDistribution& dist, double x, double y) {
  return std::visit(
      Overloaded{
          [&](const DiscreteJoint& d) {
            double f = 0.0, g = 0.0, h = 0.0;
            const auto& xs = d.x_support();
            const auto& ys = d.y_support();
            for (std::size_t i = 0; i < d.nx(); ++i) {
              if (xs[i] <= x) g += d.marginal_x()[i];
            }
            for (std::size_t j = 0; j < d.ny(); ++j) {
              if (ys[j] <= y) h += d.marginal_y()[j];
            }
            for (std::size_t i = 0; i < d.nx() && xs[i] <= x; ++i) {
              for (std::size_t j = 0; j < d.ny() && ys[j] <= y; ++j) f += d.p(i, j);
            }
            return cdf_ratio(f, g, h, x, y);
          },
          [&](const ContinuousJoint& c) {
            return cdf_ratio(c.joint_cdf(x, y), c.cdf_x(x), c.cdf_y(y), x, y);
          },
          [&](const NamedFamily& f) {
            const ContinuousJoint c = as_continuous(f);
            return cdf_ratio(c.joint_cdf(x, y), c.cdf_x(x), c.cdf_y(y), x, y);
          },
          [&](const CurveSingularJoint& c) {
            return cdf_ratio(c.joint_cdf(x, y), c.cdf_x(x), c.cdf_y(y), x, y);
          },
      },
      dist);
}

LiftField lift_grid(const JointDistribution& dist, const std::vector<double>& grid_x,
                    const std::vector<double>& grid_y, double tol) {
  check_grid(grid_x, "x");
  check_grid(grid_y, "y");
  LiftField field;
  field.grid_x = grid_x;
  field.grid_y = grid_y;
  field.values.assign(grid_x.size() * grid_y.size(), kNaN);
  field.labels.assign(field.values.size(), LiftLabel::Undefined);

  std::optional<LiftField> discrete;
  if (const auto* d = std::get_if<DiscreteJoint>(&dist)) discrete = discrete_lift(*d, tol);

  const auto point = [&](double x, double y) -> double {
    return std::visit(
        Overloaded{
            [&](const DiscreteJoint& d) -> double {
              const auto i = d.x_index(x);
              const auto j = d.y_index(y);
              if (!i || !j) fail(ErrorCode::OutOfSupport, "grid point is not a support label");
              return discrete->value(*i, *j);
            },
            [&](const ContinuousJoint& c) { return continuous_lift_at(c, x, y); },
            [&](const NamedFamily& f) { return continuous_lift_at(f, x, y); },
            [&](const CurveSingularJoint& c) { return curve_lift_at(c, x, y); },
        },
        dist);
  };

  for (std::size_t i = 0; i < grid_x.size(); ++i) {
    for (std::size_t j = 0; j < grid_y.size(); ++j) {
      const std::size_t k = i * grid_y.size() + j;
      try {
        const double v = point(grid_x[i], grid_y[j]);
        field.values[k] = v;
        field.labels[k] = classify(v, tol);
        if (field.labels[k] == LiftLabel::Undefined) field.values[k] = kNaN;
      } catch (const Error&) {
        field.values[k] = kNaN;
        field.labels[k] = LiftLabel::Undefined;
      }
    }
  }
  return field;
}

RegionSummary region_summary(const JointDistribution& dist, double tol) {
  const auto continuous = [tol](const ContinuousJoint& c,
                                const std::function<double(double, double)>& lift) {
    const auto f = [&](double x, double y) -> std::array<double, 3> {
      const double w = c.marginal_x(x) * c.marginal_y(y);
      if (w == 0.0) return {0.0, 0.0, 0.0};
      const double v = lift(x, y);
      switch (classify(v, tol)) {
        case LiftLabel::Lift: return {w, 0.0, 0.0};
        case LiftLabel::Inhibit:
        case LiftLabel::Zero: return {0.0, w, 0.0};
        case LiftLabel::Neutral: return {0.0, 0.0, w};
        case LiftLabel::Undefined: return {0.0, 0.0, 0.0};
      }
      return {0.0, 0.0, 0.0};
    };
    numerics::QuadratureOptions opt;
    opt.abs_tol = 1e-7;
    opt.rel_tol = 1e-7;
    opt.max_evals = std::size_t{1} << 20;
    const auto r = numerics::integrate_2d_3(f, c.box(), opt);
    return RegionSummary{r.value[0], r.value[1], r.value[2]};
  };

  return std::visit(
      Overloaded{
          [&](const DiscreteJoint& d) {
            RegionSummary s;
            const LiftField field = discrete_lift(d, tol);
            for (std::size_t i = 0; i < d.nx(); ++i) {
              for (std::size_t j = 0; j < d.ny(); ++j) {
                const double w = d.marginal_x()[i] * d.marginal_y()[j];
                switch (field.label(i, j)) {
                  case LiftLabel::Lift: s.mass_lift += w; break;
                  case LiftLabel::Inhibit:
                  case LiftLabel::Zero: s.mass_inhibit += w; break;
                  case LiftLabel::Neutral: s.mass_neutral += w; break;
                  case LiftLabel::Undefined: break;
                }
              }
            }
            return s;
          },
          [&](const ContinuousJoint& c) {
            return continuous(c, [&c](double x, double y) { return lift_or_nan(c, x, y); });
          },
          [&](const NamedFamily& f) {
            const ContinuousJoint c = as_continuous(f);
            if (const auto* b = std::get_if<BivariateNormal>(&f)) {
              const double r = b->r;
              return continuous(c, [r](double x, double y) { return bvn_lift(r, x, y); });
            }
            return continuous(c, [&c](double x, double y) { return lift_or_nan(c, x, y); });
          },
          [&](const CurveSingularJoint&) -> RegionSummary {
            fail(ErrorCode::InvalidArgument,
                 "region summary needs a law absolutely continuous w.r.t. the product measure");
          },
      },
      dist);
}

double curve_line_integral(const CurveSingularJoint& dist, double a, double b) {
  a = std::max(a, dist.support_lo());
  b = std::min(b, dist.support_hi());
  if (!(a < b)) return 0.0;
  const auto& branches = dist.branches();
  double total = 0.0;
  for (std::size_t n = 0; n < branches.size(); ++n) {
    const CurveBranch& br = branches[n];
    if (br.weight == 0.0) continue;
    const auto f = [&](double x) {
      const double rx = dist.marginal_x(x);
      if (rx == 0.0) return 0.0;
      const double y = br.phi(x);
      const double d = br.dphi(x);
      const double arc = std::sqrt(1.0 + d * d);
      // Lift on this branch, ignoring the tie-break with earlier branches,
      // which only matters on a countable set.
      const double ry = dist.marginal_y(y);
      if (!(ry >= kTinyMarginal)) undefined_at(x, y, "rho_Y vanishes on the curve");
      const double lift = 2.0 * br.weight / (std::numbers::pi * ry * arc);
      return 0.5 * std::numbers::pi * lift * rx * ry * arc;
    };
    numerics::QuadratureOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-11;
    opt.max_evals = std::size_t{1} << 18;
    total += numerics::integrate_1d(f, a, b, opt).value;
  }
  return total;
}

}  // namespace liftscale
