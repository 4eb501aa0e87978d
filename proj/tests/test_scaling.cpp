#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "liftscale/distributions.hpp"
#include "liftscale/scaling.hpp"

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

__extension__ typedef unsigned __int128 u128;

// x = m 2^-e exactly, so 3^n x mod 1 = (3^n m mod 2^e) / 2^e in integers.
long double weierstrass_exact(double x, int n_terms) {
  int e2 = 0;
  const double frac = std::frexp(x, &e2);
  const auto m = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  const int e = 53 - e2;
  if (e <= 0) return 1.0L - std::ldexp(1.0L, -n_terms);
  const u128 mask = (u128{1} << e) - 1;
  u128 p = 1;
  long double s = 0.0L;
  for (int n = 1; n <= n_terms; ++n) {
    p *= 3;
    const u128 r = (p * m) & mask;
    const long double phase = std::ldexp(static_cast<long double>(r), -e);
    s += std::cos(2.0L * std::numbers::pi_v<long double> * phase) / std::ldexp(1.0L, n);
  }
  return s;
}

std::vector<Point> uniform_square(std::size_t n, std::uint64_t seed) {
  return sample(NamedFamily{IndependentProduct{Univariate::uniform(0, 1), Univariate::uniform(0, 1)}}, n, seed);
}

std::size_t brute_count(const std::vector<Point>& pts, Point c, double eps) {
  std::size_t k = 0;
  for (const auto& p : pts) k += std::hypot(p.x - c.x, p.y - c.y) <= eps;
  return k;
}

}  // namespace

TEST(BallDensity, Examples) {
  const std::vector<Point> one{{0.3, -0.2}};
  EXPECT_NEAR(ball_density(one, {0.3, -0.2}, 1.0), 1.0 / std::numbers::pi, 1e-15);
  std::vector<Point> ring;
  for (int k = 0; k < 16; ++k) {
    const double t = 2 * std::numbers::pi * k / 16;
    ring.push_back({2 * std::cos(t), 2 * std::sin(t)});
  }
  EXPECT_EQ(ball_density(ring, {0, 0}, 1.0), 0.0);
  const double e = 2.0 + 1e-12;
  EXPECT_NEAR(ball_density(ring, {0, 0}, e), 1.0 / (std::numbers::pi * e * e), 1e-15);
}

TEST(BallDensity, UniformSquareInterior) {
  const auto pts = uniform_square(1'000'000, 42);
  EXPECT_NEAR(ball_density(pts, {0.5, 0.5}, 0.1), 1.0, 0.02);
}

TEST(BallDensity, Errors) {
  const std::vector<Point> one{{0, 0}};
  EXPECT_EQ(code_of([&] { ball_density(one, {0, 0}, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { ball_density(std::vector<Point>{}, {0, 0}, 1.0); }), ErrorCode::InvalidArgument);
}

TEST(BallCounter, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 1);
  std::vector<Point> pts(20'000);
  for (auto& p : pts) p = {g(rng), 3 * g(rng)};
  // Exact boundary hits.
  pts.push_back({0.5, 0.0});
  pts.push_back({0.0, -0.5});
  for (double w : {0.01, 0.2, 5.0}) {
    const BallCounter bc(pts, w);
    EXPECT_EQ(bc.size(), pts.size());
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 30; ++t) {
      const Point c{u(rng), u(rng)};
      for (double eps : {1e-3, 0.05, 0.5, 2.0, 40.0}) EXPECT_EQ(bc.count(c, eps), brute_count(pts, c, eps));
    }
    EXPECT_EQ(bc.count({0, 0}, 0.5), brute_count(pts, {0, 0}, 0.5));
  }
}

TEST(BallProfile, MonotoneCounts) {
  const auto pts = uniform_square(100'000, 1);
  const auto prof = ball_profile(pts, {0.4, 0.6}, 0.2, 1e-3, 10);
  ASSERT_EQ(prof.radii.size(), 10u);
  EXPECT_DOUBLE_EQ(prof.radii.front(), 0.2);
  EXPECT_NEAR(prof.radii.back(), 1e-3, 1e-15);
  for (std::size_t i = 1; i < prof.radii.size(); ++i) {
    EXPECT_LT(prof.radii[i], prof.radii[i - 1]);
    EXPECT_LE(prof.counts[i], prof.counts[i - 1]);
    EXPECT_GE(prof.densities[i], 0.0);
    EXPECT_NEAR(prof.densities[i],
                static_cast<double>(prof.counts[i]) / 1e5 / (std::numbers::pi * prof.radii[i] * prof.radii[i]), 1e-12);
  }
  EXPECT_EQ(code_of([] { geometric_radii(0.1, 0.01, 3); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { geometric_radii(0.01, 0.1, 5); }), ErrorCode::InvalidArgument);
}

TEST(ScalingExponent, UniformSquareIsTwo) {
  const auto pts = uniform_square(1'000'000, 42);
  const auto est = scaling_exponent(pts, {0.5, 0.5}, 0.1, 1e-3, 12);
  EXPECT_NEAR(est.s_hat, 2.0, 0.1);
  EXPECT_GE(est.fit_r2, 0.99);
  EXPECT_LE(est.fit_r2, 1.0);
  EXPECT_GE(est.radii_used.size(), 4u);
}

TEST(ScalingExponent, LineIsOne) {
  const auto d = CurveSingularJoint::from_marginal(Univariate::uniform(0, 1), {linear_branch(1, 0)});
  const auto pts = sample(d, 1'000'000, 42);
  const auto est = scaling_exponent(pts, {0.5, 0.5}, 0.1, 1e-3, 12);
  EXPECT_NEAR(est.s_hat, 1.0, 0.1);
}

TEST(ScalingExponent, WeierstrassGraphBetweenOneAndTwo) {
  const WeierstrassCurve w;
  const auto pts = sample_weierstrass_graph(w, 1'000'000, 42);
  const double x0 = 0.2;
  const auto est = scaling_exponent(pts, {x0, weierstrass_eval(w, x0)}, 0.1, 1e-3, 12);
  EXPECT_GT(est.s_hat, 1.0);
  EXPECT_LT(est.s_hat, 2.0);
}

TEST(ScalingExponent, InsufficientRadii) {
  const auto pts = uniform_square(1000, 3);
  EXPECT_EQ(code_of([&] { scaling_exponent(pts, {5, 5}, 0.1, 1e-3, 12); }), ErrorCode::InsufficientRadii);
  // Radii below about 0.05 hold fewer than 10 of 1000 points.
  EXPECT_EQ(code_of([&] { scaling_exponent(pts, {0.5, 0.5}, 0.05, 1e-4, 8); }), ErrorCode::InsufficientRadii);
}

TEST(ScalingExponent, RangeAtTypicalCenters) {
  const std::vector<JointDistribution> fixtures{
      NamedFamily{BivariateNormal(0.6)},
      NamedFamily{CircularCauchy{}},
      NamedFamily{IndependentProduct{Univariate::exponential(1), Univariate::normal(0, 1)}},
      CurveSingularJoint::from_marginal(Univariate::normal(0, 1), {linear_branch(1, 0)}),
      CurveSingularJoint::from_marginal(Univariate::uniform(0, 1), {quadratic_branch(1, 0, 0)}),
  };
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    const auto pts = sample(fixtures[f], 1'000'000, 17 + f);
    // Typical centres: sample points inside the interquartile box.
    std::vector<double> xs, ys;
    for (const auto& p : pts) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    const auto quartile = [](std::vector<double> v, double q) {
      auto it = v.begin() + static_cast<std::ptrdiff_t>(q * static_cast<double>(v.size()));
      std::nth_element(v.begin(), it, v.end());
      return *it;
    };
    const double x1 = quartile(xs, 0.25), x3 = quartile(xs, 0.75);
    const double y1 = quartile(ys, 0.25), y3 = quartile(ys, 0.75);
    int tried = 0;
    for (const auto& c : pts) {
      if (c.x < x1 || c.x > x3 || c.y < y1 || c.y > y3) continue;
      const auto est = scaling_exponent(pts, c, 0.2, 3e-3, 10);
      EXPECT_GE(est.s_hat, 0.85) << f;
      EXPECT_LE(est.s_hat, 2.15) << f;
      if (++tried == 3) break;
    }
    EXPECT_EQ(tried, 3) << f;
  }
}

TEST(ScalingProperties, BallDensityApproachesBvnDensity) {
  const auto pts = sample(NamedFamily{BivariateNormal(0.6)}, 1'000'000, 42);
  const auto prof = ball_profile(pts, {0, 0}, 0.5, 0.1, 6);
  const double rho = 1.0 / (2 * std::numbers::pi * 0.8);
  EXPECT_NEAR(prof.densities.back(), rho, 0.05 * rho);
  // Coarser radii see the curvature of the density.
  EXPECT_LT(std::abs(prof.densities.back() - rho), std::abs(prof.densities.front() - rho));
}

TEST(ScalingProperties, CurvePrefactor) {
  const auto d = CurveSingularJoint::from_marginal(Univariate::normal(0, 1), {linear_branch(1, 0)});
  const auto pts = sample(d, 1'000'000, 42);
  const double x = 0.3, eps = 0.01;
  const double rho_eps = ball_density(pts, {x, x}, eps);
  const double ref = std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
  EXPECT_NEAR(eps * rho_eps * std::numbers::pi * std::numbers::sqrt2 / 2, ref, 0.1 * ref);

  const auto steep = CurveSingularJoint::from_marginal(Univariate::uniform(0, 1), {linear_branch(3, 0)});
  const auto sp = sample(steep, 1'000'000, 8);
  const double r2 = ball_density(sp, {0.5, 1.5}, eps);
  EXPECT_NEAR(eps * r2 * std::numbers::pi * std::sqrt(10.0) / 2, 1.0, 0.1);
}

TEST(Weierstrass, TrivialPoints) {
  for (int n : {1, 5, 30}) {
    const WeierstrassCurve w{n};
    EXPECT_DOUBLE_EQ(weierstrass_eval(w, 0.0), 1.0 - std::ldexp(1.0, -n));
    EXPECT_NEAR(weierstrass_eval(w, 0.5), -(1.0 - std::ldexp(1.0, -n)), 1e-15);
  }
  EXPECT_EQ(code_of([] { weierstrass_eval(WeierstrassCurve{0}, 0.1); }), ErrorCode::InvalidArgument);
}

TEST(Weierstrass, AgainstExactPhaseOracle) {
  const WeierstrassCurve w;
  EXPECT_NEAR(weierstrass_eval(w, 0.25), static_cast<double>(weierstrass_exact(0.25, 30)), 1e-14);
  EXPECT_NEAR(weierstrass_eval(w, 0.1), 0.0636610018154957, 1e-13);
  EXPECT_NEAR(weierstrass_eval(w, 0.3), 0.436338997706188, 1e-13);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 0.5);
  for (int t = 0; t < 200; ++t) {
    const double x = u(rng);
    EXPECT_NEAR(weierstrass_eval(w, x), static_cast<double>(weierstrass_exact(x, 30)), 1e-13) << x;
  }
}

TEST(Weierstrass, TailBound) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 0.5);
  for (int t = 0; t < 100; ++t) {
    const double x = u(rng);
    for (auto [n, m] : {std::pair{5, 30}, {10, 20}, {30, 33}}) {
      const double d = std::abs(weierstrass_eval(WeierstrassCurve{n}, x) - weierstrass_eval(WeierstrassCurve{m}, x));
      EXPECT_LE(d, std::ldexp(1.0, -std::min(n, m)) + 1e-15);
    }
  }
}

TEST(Weierstrass, Grid) {
  const WeierstrassCurve w;
  const auto two = weierstrass_grid(w, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].x, 0.0);
  EXPECT_EQ(two[1].x, 0.5);
  EXPECT_DOUBLE_EQ(two[0].y, 1.0 - std::ldexp(1.0, -30));
  const auto three = weierstrass_grid(w, 3);
  EXPECT_EQ(three[1].x, 0.25);
  EXPECT_EQ(three[1].y, weierstrass_eval(w, 0.25));
  double mx = 0.0;
  for (const auto& p : weierstrass_grid(w, 10'000)) mx = std::max(mx, std::abs(p.y));
  EXPECT_LE(mx, 1.0);
  EXPECT_EQ(code_of([&] { weierstrass_grid(w, 1); }), ErrorCode::InvalidArgument);
}

TEST(Weierstrass, SamplerStaysOnGraph) {
  const WeierstrassCurve w{12};
  const auto pts = sample_weierstrass_graph(w, 1000, 4);
  for (const auto& p : pts) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 0.5);
    EXPECT_EQ(p.y, weierstrass_eval(w, p.x));
  }
}
