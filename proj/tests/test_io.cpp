#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "liftscale/io.hpp"

using namespace liftscale;
using nlohmann::json;

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

DiscreteJoint pmf_from(const std::string& text) {
  std::istringstream in(text);
  return io::read_pmf_csv(in);
}

std::vector<Point> samples_from(const std::string& text) {
  std::istringstream in(text);
  return io::read_samples_csv(in);
}

}  // namespace

TEST(FormatDouble, RoundTripsAndSpellsNonFinite) {
  for (double v : {0.1, -1e-300, 1.0 / 3.0, 123456789.125, 0.0}) {
    EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::format_double(1.25), "1.25");
}

TEST(ParseDouble, Strict) {
  EXPECT_EQ(io::parse_double(" 2.5 "), 2.5);
  EXPECT_EQ(io::parse_double("+3"), 3.0);
  EXPECT_EQ(io::parse_double("-1e-3"), -1e-3);
  for (const char* bad : {"", "abc", "1.5x", "1,5", "--1"}) {
    EXPECT_EQ(code_of([&] { io::parse_double(bad); }), ErrorCode::ParseError) << bad;
  }
}

TEST(PmfCsv, Reads) {
  const auto d = pmf_from(
      "# two by two\n"
      "x,y:0,y:1\n"
      "\n"
      "0,0.4,0.1\n"
      "1,0.1,0.4\n");
  EXPECT_EQ(d.nx(), 2u);
  EXPECT_EQ(d.y_support(), (std::vector<double>{0, 1}));
  EXPECT_EQ(d.p(0, 1), 0.1);
  EXPECT_EQ(d.p(1, 1), 0.4);
}

TEST(PmfCsv, Errors) {
  EXPECT_EQ(code_of([] { pmf_from(""); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { pmf_from("x\n0\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { pmf_from("x,0,1\n0,0.5,0.5\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { pmf_from("x,y:0,y:1\n0,0.5\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { pmf_from("x,y:0,y:1\n0,0.5,abc\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { pmf_from("x,y:0,y:1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { pmf_from("x,y:0,y:1\n0,0.5,0.4\n"); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code_of([] { io::read_pmf_file("/nonexistent/pmf.csv"); }), ErrorCode::IoError);
}

TEST(PmfCsv, ErrorNamesLine) {
  try {
    pmf_from("x,y:0\n0,1\n\n1,zz\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(SamplesCsv, RoundTrip) {
  const std::vector<Point> pts{{0.1, -2.0}, {1e-300, 3.5}, {1.0 / 3.0, 0.0}};
  std::ostringstream out;
  io::write_samples_csv(out, pts);
  EXPECT_EQ(out.str().substr(0, 4), "x,y\n");
  const auto back = samples_from(out.str());
  ASSERT_EQ(back.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(back[i].x, pts[i].x);
    EXPECT_EQ(back[i].y, pts[i].y);
  }
}

TEST(SamplesCsv, Errors) {
  EXPECT_EQ(code_of([] { samples_from(""); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { samples_from("a,b\n1,2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { samples_from("x,y\n1,2,3\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { samples_from("x,y\n1,\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::read_samples_file("/nonexistent/s.csv"); }), ErrorCode::IoError);
  EXPECT_TRUE(samples_from("x,y\n").empty());
}

TEST(SamplesFile, ReadsFromDisk) {
  const auto path = std::filesystem::temp_directory_path() / "liftscale_io_samples.csv";
  {
    std::ofstream f(path);
    f << "x,y\n1,2\n3,4\n";
  }
  const auto pts = io::read_samples_file(path.string());
  std::filesystem::remove(path);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[1].y, 4.0);
}

TEST(CsvWriters, LiftField) {
  LiftField f;
  f.grid_x = {0, 1};
  f.grid_y = {0.5};
  f.values = {1.6, std::nan("")};
  f.labels = {LiftLabel::Lift, LiftLabel::Undefined};
  std::ostringstream out;
  io::write_lift_field_csv(out, f);
  EXPECT_EQ(out.str(), "x,y,L,label\n0,0.5,1.6000000000000001,Lift\n1,0.5,nan,Undefined\n");
}

TEST(CsvWriters, ProfileCounterexampleWeierstrass) {
  BallDensityProfile p;
  p.radii = {1.0, 0.5};
  p.counts = {10, 3};
  p.densities = {0.25, 0.125};
  std::ostringstream a;
  io::write_profile_csv(a, p);
  EXPECT_EQ(a.str(), "eps,count,rho_eps\n1,10,0.25\n0.5,3,0.125\n");

  std::ostringstream b;
  io::write_counterexample_csv(b, {{0.5, 0.25, 0.75, false}, {0.75, 1.0, 0.75, true}});
  EXPECT_EQ(b.str(), "r,mi,limit_mi,exceeds\n0.5,0.25,0.75,0\n0.75,1,0.75,1\n");

  std::ostringstream c;
  io::write_weierstrass_csv(c, {{0.0, 0.5}});
  EXPECT_EQ(c.str(), "x,w\n0,0.5\n");
}

TEST(Json, MiReport) {
  const auto j = json::parse(io::to_json(MiReport{0.25, MiMethod::ClosedForm, 0.0, 0}));
  EXPECT_EQ(j["value"], 0.25);
  EXPECT_EQ(j["method"], "ClosedForm");
  EXPECT_EQ(j["abs_error_estimate"], 0.0);
  EXPECT_EQ(j["n_evals"], 0);
  const auto k = json::parse(io::to_json(MiReport{std::nan(""), MiMethod::Quadrature, 1.0, 5}));
  EXPECT_TRUE(k["value"].is_null());
}

TEST(Json, RegionTargetScaling) {
  const auto r = json::parse(io::to_json(RegionSummary{0.5, 0.25, 0.25}));
  EXPECT_EQ(r["mass_lift"], 0.5);
  EXPECT_EQ(r["mass_neutral"], 0.25);

  TargetingResult t;
  t.target_lo = 1;
  t.target_hi = 2;
  t.target_is_interval = true;
  t.x_opt = 2.5;
  t.lift_at_opt = 2;
  t.baseline_rate = 0.125;
  t.boosted_rate = 0.25;
  t.expected_extra_per_n = 0.125;
  const auto tj = json::parse(io::to_json(t));
  EXPECT_EQ(tj["target_y"], json::array({1.0, 2.0}));
  for (const char* key : {"x_opt", "lift_at_opt", "baseline_rate", "boosted_rate", "expected_extra_per_n"}) {
    EXPECT_TRUE(tj.contains(key)) << key;
  }
  t.target_is_interval = false;
  EXPECT_EQ(json::parse(io::to_json(t))["target_y"], 1.0);

  const auto sj = json::parse(io::to_json(ScalingEstimate{{0.5, 0.25}, 1.5, 0.99, {0.1, 0.05}}));
  EXPECT_EQ(sj["center"], json::array({0.5, 0.25}));
  EXPECT_EQ(sj["s_hat"], 1.5);
  EXPECT_EQ(sj["radii_used"].size(), 2u);
}
