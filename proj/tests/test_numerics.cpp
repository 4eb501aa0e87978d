#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "liftscale/numerics.hpp"

using namespace liftscale;
using numerics::integrate_1d;
using numerics::integrate_2d;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Integrate1d, Polynomial) {
  const auto r = integrate_1d([](double x) { return x * x; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(Integrate1d, InfiniteRanges) {
  EXPECT_NEAR(integrate_1d(numerics::normal_pdf, -kInf, kInf).value, 1.0, 1e-12);
  EXPECT_NEAR(integrate_1d([](double x) { return std::exp(-x); }, 0.0, kInf).value, 1.0, 1e-12);
  EXPECT_NEAR(integrate_1d(numerics::normal_pdf, -kInf, 1.0).value, numerics::normal_cdf(1.0), 1e-12);
}

TEST(Integrate1d, AgreesWithBoostGaussKronrod) {
  const auto f = [](double x) { return std::sin(3.0 * x) * std::exp(-x) / (1.0 + x * x); };
  const double ref = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 5.0, 15, 1e-14);
  EXPECT_NEAR(integrate_1d(f, 0.0, 5.0).value, ref, 1e-12);
}

TEST(Integrate1d, ReversedLimitsFlipSign) {
  const auto f = [](double x) { return std::cos(x); };
  EXPECT_NEAR(integrate_1d(f, 1.0, 0.0).value, -std::sin(1.0), 1e-13);
}

TEST(Integrate2d, SeparableProduct) {
  const auto r = integrate_2d([](double x, double y) { return x * x * y * y; }, Box{0, 1, 0, 1});
  EXPECT_NEAR(r.value, 1.0 / 9.0, 1e-13);
}

TEST(Integrate2d, PlaneMassOfHeavyTailedDensity) {
  const auto f = [](double x, double y) {
    const double q = 1.0 + x * x + y * y;
    return 1.0 / (2.0 * std::numbers::pi * q * std::sqrt(q));
  };
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-9;
  const auto r = integrate_2d(f, Box::plane(), opt);
  EXPECT_NEAR(r.value, 1.0, 1e-7);
}

TEST(Integrate2d, HalfInfiniteBox) {
  // Standard normal product on [0, inf) x (-inf, 1]
  const auto f = [](double x, double y) { return numerics::normal_pdf(x) * numerics::normal_pdf(y); };
  const auto r = integrate_2d(f, Box{0.0, kInf, -kInf, 1.0});
  EXPECT_NEAR(r.value, 0.5 * numerics::normal_cdf(1.0), 1e-10);
}

TEST(Integrate2d, Deterministic) {
  const auto f = [](double x, double y) { return std::exp(-std::abs(x - y)) * numerics::normal_pdf(x); };
  const auto a = integrate_2d(f, Box{-5, 5, -5, 5});
  const auto b = integrate_2d(f, Box{-5, 5, -5, 5});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.n_evals, b.n_evals);
}

TEST(Integrate2d, ThreeOutputsShareCells) {
  const auto f = [](double x, double y) -> std::array<double, 3> {
    return {1.0, x, x * y};
  };
  const auto r = numerics::integrate_2d_3(f, Box{0, 2, 0, 3});
  EXPECT_NEAR(r.value[0], 6.0, 1e-12);
  EXPECT_NEAR(r.value[1], 6.0, 1e-12);
  EXPECT_NEAR(r.value[2], 9.0, 1e-12);
}

TEST(Integrate2d, BudgetIsRespected) {
  numerics::QuadratureOptions opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-15;
  opt.max_evals = 5000;
  const auto f = [](double x, double y) { return std::sqrt(std::abs(x - y)); };
  const auto r = integrate_2d(f, Box{0, 1, 0, 1}, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.n_evals, opt.max_evals + 2 * 225);
}

TEST(Integrate2d, NonFiniteIntegrandIsAnError) {
  const auto f = [](double, double) { return std::nan(""); };
  try {
    integrate_2d(f, Box{0, 1, 0, 1});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(RootFinding, Bracketed) {
  const auto f = [](double x) { return std::cos(x) - x; };
  const auto df = [](double x) { return -std::sin(x) - 1.0; };
  EXPECT_NEAR(numerics::find_root_bracketed(f, df, 0.0, 1.0, 1e-14), 0.7390851332151607, 1e-13);
  EXPECT_NEAR(numerics::bisect_sign_change(f, 0.0, 1.0), 0.7390851332151607, 1e-13);
}

TEST(RootFinding, BadDerivativeStillConverges) {
  const auto f = [](double x) { return x * x * x - 2.0; };
  const auto df = [](double) { return 1e-9; };
  EXPECT_NEAR(numerics::find_root_bracketed(f, df, 0.0, 3.0, 1e-13), std::cbrt(2.0), 1e-12);
}

TEST(TabulatedInverseCdf, Uniform) {
  const numerics::TabulatedInverseCdf t([](double) { return 0.5; }, 0.0, 2.0);
  EXPECT_NEAR(t.quantile(0.25), 0.5, 1e-12);
  EXPECT_NEAR(t.quantile(0.0), 0.0, 1e-12);
  EXPECT_NEAR(t.quantile(1.0), 2.0, 1e-12);
}

TEST(TabulatedInverseCdf, NormalQuantilesWithinGridAccuracy) {
  const numerics::TabulatedInverseCdf t(numerics::normal_pdf, -10.0, 10.0);
  for (double u : {0.01, 0.1, 0.3, 0.5, 0.8, 0.975}) {
    const double x = t.quantile(u);
    EXPECT_NEAR(numerics::normal_cdf(x), u, 1e-4) << u;
  }
}
