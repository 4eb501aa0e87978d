#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "liftscale/infomeasure.hpp"
#include "liftscale/numerics.hpp"
#include "oracles.hpp"

using namespace liftscale;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

const double kSingularLimit = std::log(2.0 * std::sqrt(std::numbers::e) / std::sqrt(std::numbers::pi));

CurveSingularJoint normal_line(double slope) {
  return CurveSingularJoint::from_marginal(Univariate::normal(0, 1), {linear_branch(slope, 0)});
}

}  // namespace

TEST(MiDiscrete, Examples) {
  const auto ind = mi_discrete(DiscreteJoint::from_rows({{0.06, 0.14}, {0.24, 0.56}}));
  EXPECT_NEAR(ind.value, 0.0, 1e-15);
  EXPECT_EQ(ind.method, MiMethod::ExactSum);
  EXPECT_NEAR(mi_discrete(DiscreteJoint::from_rows({{0.5, 0.0}, {0.0, 0.5}})).value, std::log(2.0), 1e-15);
  EXPECT_NEAR(mi_discrete(DiscreteJoint::from_rows({{0.4, 0.1}, {0.1, 0.4}})).value,
              0.8 * std::log(1.6) + 0.2 * std::log(0.4), 1e-15);
  EXPECT_NEAR(mi_discrete(DiscreteJoint::from_rows({{0.4, 0.1}, {0.1, 0.4}})).value, 0.192744757022, 1e-12);
}

TEST(MiDiscrete, NonNegativeAndBoundedByEntropy) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto d = oracle::random_pmf(rng, 1 + rng() % 7, 1 + rng() % 7);
    const double mi = mi_discrete(d).value;
    double hx = 0.0;
    for (double p : d.marginal_x()) {
      if (p > 0) hx -= p * std::log(p);
    }
    EXPECT_GE(mi, -1e-12);
    EXPECT_LE(mi, hx + 1e-12);
  }
}

TEST(MiClosedForm, Examples) {
  EXPECT_EQ(mi_bvn_closed_form(0.0).value, 0.0);
  EXPECT_NEAR(mi_bvn_closed_form(0.6).value, 0.223143551314, 1e-12);
  EXPECT_NEAR(mi_bvn_closed_form(-0.6).value, 0.223143551314, 1e-12);
  EXPECT_NEAR(mi_bvn_closed_form(0.99).value, 1.958517774, 1e-9);
  EXPECT_EQ(mi_bvn_closed_form(0.3).method, MiMethod::ClosedForm);
  EXPECT_EQ(code_of([] { mi_bvn_closed_form(1.0); }), ErrorCode::DegenerateCorrelation);
  EXPECT_EQ(code_of([] { mi_bvn_closed_form(-1.5); }), ErrorCode::DegenerateCorrelation);
}

TEST(MiContinuous, BvnQuadratureAgreesWithClosedForm) {
  for (double r : {0.0, 0.3, 0.6, 0.9}) {
    const auto rep = mi_continuous(NamedFamily{BivariateNormal(r)});
    EXPECT_EQ(rep.method, MiMethod::Quadrature);
    EXPECT_NEAR(rep.value, -0.5 * std::log1p(-r * r), 1e-3) << r;
    EXPECT_LE(rep.abs_error_estimate, 1e-3);
    EXPECT_GT(rep.n_evals, 0u);
  }
}

TEST(MiContinuous, GenericJointMatchesNamedPath) {
  const auto rep = mi_continuous(as_continuous(BivariateNormal(0.6)));
  EXPECT_NEAR(rep.value, 0.223143551314, 1e-3);
}

TEST(MiContinuous, CircularCauchy) {
  const auto rep = mi_continuous(NamedFamily{CircularCauchy{}});
  EXPECT_NEAR(rep.value, 0.223, 5e-3);
  // Bivariate t with one degree of freedom.
  EXPECT_NEAR(rep.value, 0.2241714275, 1e-3);
}

TEST(MiContinuous, IndependentIsZero) {
  for (const NamedFamily& f :
       {NamedFamily{IndependentProduct{Univariate::normal(0, 1), Univariate::uniform(-1, 2)}},
        NamedFamily{IndependentProduct{Univariate::exponential(0.5), Univariate::normal(3, 0.2)}}}) {
    EXPECT_NEAR(mi_continuous(f).value, 0.0, 1e-6) << family_name(f);
  }
}

TEST(MiContinuous, BudgetExhaustion) {
  MiOptions opt;
  opt.max_evals = 500;
  opt.max_abs_error = 1e-9;
  EXPECT_EQ(code_of([&] { mi_continuous(NamedFamily{CircularCauchy{}}, opt); }),
            ErrorCode::QuadratureNotConverged);
  opt.monte_carlo_fallback = true;
  opt.monte_carlo_samples = 200'000;
  const auto rep = mi_continuous(NamedFamily{CircularCauchy{}}, opt);
  EXPECT_EQ(rep.method, MiMethod::MonteCarlo);
  EXPECT_NEAR(rep.value, 0.2241714275, 5 * rep.abs_error_estimate);
}

TEST(MiCurve, Examples) {
  const auto id = mi_curve(normal_line(1));
  EXPECT_EQ(id.method, MiMethod::CurveQuadrature);
  EXPECT_NEAR(id.value, kSingularLimit, 1e-8);
  EXPECT_NEAR(id.value, 0.620782237635, 1e-9);

  const auto u = CurveSingularJoint::from_marginal(Univariate::uniform(0, 1), {linear_branch(1, 0)});
  EXPECT_NEAR(mi_curve(u).value, std::log(std::numbers::sqrt2 / std::numbers::pi), 1e-9);

  const auto m = CurveSingularJoint::from_marginal(Univariate::uniform(0, 1),
                                                   {linear_branch(1, 0, 0.5), linear_branch(-1, 1, 0.5)});
  EXPECT_NEAR(mi_curve(m).value, std::log(1.0 / (std::numbers::pi * std::numbers::sqrt2)), 1e-9);
}

TEST(MiCurve, SlopeTwoAgainstIndependentQuadrature) {
  // Y = 2X has a N(0, 4) law.
  const auto integrand = [](double x) {
    const double log_rho_y = -0.5 * x * x - 0.5 * std::log(2 * std::numbers::pi) - std::log(2.0);
    return numerics::normal_pdf(x) * (std::log(2.0 / (std::numbers::pi * std::sqrt(5.0))) - log_rho_y);
  };
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-13);
  const double analytic = std::log(2.0 / (std::numbers::pi * std::sqrt(5.0))) + 0.5 * std::log(8 * std::numbers::pi) + 0.5;
  EXPECT_NEAR(ref, analytic, 1e-10);
  EXPECT_NEAR(mi_curve(normal_line(2)).value, analytic, 1e-8);
  EXPECT_NEAR(analytic, 0.855784052258113, 1e-12);
}

TEST(MiMonteCarlo, WithinFourSigma) {
  for (double r : {0.3, 0.6}) {
    const auto rep = mi_monte_carlo(NamedFamily{BivariateNormal(r)}, 200'000, 42);
    EXPECT_EQ(rep.method, MiMethod::MonteCarlo);
    EXPECT_GT(rep.abs_error_estimate, 0.0);
    EXPECT_NEAR(rep.value, -0.5 * std::log1p(-r * r), 4 * rep.abs_error_estimate);
  }
  const auto d = DiscreteJoint::from_rows({{0.4, 0.1}, {0.1, 0.4}});
  const auto rep = mi_monte_carlo(d, 100'000, 3);
  EXPECT_NEAR(rep.value, 0.192744757022, 4 * rep.abs_error_estimate);
}

TEST(MiMonteCarlo, Deterministic) {
  const auto a = mi_monte_carlo(NamedFamily{CircularCauchy{}}, 10'000, 9);
  const auto b = mi_monte_carlo(NamedFamily{CircularCauchy{}}, 10'000, 9);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(code_of([] { mi_monte_carlo(NamedFamily{CircularCauchy{}}, 1, 9); }), ErrorCode::InvalidArgument);
}

TEST(MutualInformation, Dispatch) {
  EXPECT_EQ(mutual_information(DiscreteJoint::from_rows({{1.0}})).method, MiMethod::ExactSum);
  EXPECT_EQ(mutual_information(NamedFamily{BivariateNormal(0.6)}).method, MiMethod::ClosedForm);
  EXPECT_EQ(mutual_information(NamedFamily{CircularCauchy{}}).method, MiMethod::Quadrature);
  EXPECT_EQ(mutual_information(normal_line(1)).method, MiMethod::CurveQuadrature);
}

TEST(MutualInformation, DependentFixturesArePositive) {
  const std::vector<JointDistribution> fixtures{
      NamedFamily{BivariateNormal(0.3)},
      NamedFamily{BivariateNormal(-0.5)},
      NamedFamily{CircularCauchy{}},
      DiscreteJoint::from_rows({{0.4, 0.1}, {0.1, 0.4}}),
      as_continuous(BivariateNormal(0.9)),
  };
  for (const auto& f : fixtures) EXPECT_GE(mutual_information(f).value, 0.01);
}

TEST(Counterexample, Schedule) {
  const auto rows = convergence_counterexample({0.9, 0.99, 0.999});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NEAR(rows[0].mi, 0.830365603, 1e-9);
  EXPECT_NEAR(rows[1].mi, 1.958517774, 1e-9);
  EXPECT_NEAR(rows[2].mi, 3.107554112, 1e-9);
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(rows[i].exceeds);
    EXPECT_NEAR(rows[i].limit_mi, kSingularLimit, 1e-8);
  }
  EXPECT_EQ(rows[3].r, 1.0);
  EXPECT_NEAR(rows[3].mi, kSingularLimit, 1e-8);
  EXPECT_FALSE(rows[3].exceeds);
}

TEST(Counterexample, EdgeSchedules) {
  const auto one = convergence_counterexample({0.6});
  ASSERT_EQ(one.size(), 2u);
  EXPECT_NEAR(one[0].mi, 0.223143551314, 1e-12);
  EXPECT_FALSE(one[0].exceeds);
  const auto empty = convergence_counterexample({});
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_NEAR(empty[0].mi, kSingularLimit, 1e-8);
  EXPECT_EQ(code_of([] { convergence_counterexample({0.9, 0.5}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { convergence_counterexample({0.9, 1.0}); }), ErrorCode::DegenerateCorrelation);
}

TEST(Counterexample, MonotoneAndUnboundedAgainstFiniteLimit) {
  std::vector<double> sched;
  for (int k = 1; k <= 12; ++k) sched.push_back(1.0 - std::pow(10.0, -k));
  const auto rows = convergence_counterexample(sched);
  for (std::size_t i = 1; i < sched.size(); ++i) EXPECT_GT(rows[i].mi, rows[i - 1].mi);
  EXPECT_GT(rows[sched.size() - 1].mi, 10.0);
  EXPECT_TRUE(std::isfinite(rows.back().mi));
}
