#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "liftscale/distributions.hpp"
#include "liftscale/error.hpp"
#include "liftscale/estimate.hpp"
#include "liftscale/infomeasure.hpp"
#include "liftscale/io.hpp"
#include "liftscale/lift.hpp"
#include "liftscale/scaling.hpp"

namespace liftscale::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DistFlags {
  std::string dist;
  std::optional<double> r;
  std::string marginal_x = "normal:0,1";
  std::string marginal_y = "normal:0,1";
  std::string pmf;
  std::vector<std::string> branches;
  int n_terms = 30;
};

struct GridFlags {
  double xmin = -4.0, xmax = 4.0, ymin = -4.0, ymax = 4.0;
  std::size_t nx = 201, ny = 201;
  std::vector<CLI::Option*> opts;

  bool given() const {
    for (auto* o : opts) {
      if (o->count() > 0) return true;
    }
    return false;
  }
};

struct Source {
  std::optional<JointDistribution> dist;
  bool weierstrass = false;
};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw UsageError("grid counts must be >= 2");
  if (!(lo < hi)) throw UsageError("grid needs min < max");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = hi;
  return g;
}

double number(std::string_view s) {
  try {
    return io::parse_double(s);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> parse_numbers(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(number(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Univariate parse_marginal(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<double>{}
                                               : parse_numbers(std::string_view(text).substr(colon + 1));
  const auto need = [&](std::size_t k) {
    if (args.size() != k) throw UsageError("marginal '" + text + "' has the wrong number of parameters");
  };
  if (kind == "normal") { need(2); return Univariate::normal(args[0], args[1]); }
  if (kind == "uniform") { need(2); return Univariate::uniform(args[0], args[1]); }
  if (kind == "cauchy") { need(2); return Univariate::cauchy(args[0], args[1]); }
  if (kind == "exponential") { need(1); return Univariate::exponential(args[0]); }
  throw UsageError("unknown marginal '" + text + "'");
}

std::vector<CurveBranch> parse_branches(const std::vector<std::string>& texts) {
  if (texts.empty()) return {linear_branch(1.0, 0.0)};
  std::vector<CurveBranch> out;
  std::size_t weighted = 0;
  for (const auto& text : texts) {
    const auto at = text.find('@');
    const std::string body = text.substr(0, at);
    double w = 1.0 / static_cast<double>(texts.size());
    if (at != std::string::npos) {
      w = number(std::string_view(text).substr(at + 1));
      ++weighted;
    }
    const auto colon = body.find(':');
    const std::string kind = body.substr(0, colon);
    const auto args = colon == std::string::npos
                          ? std::vector<double>{}
                          : parse_numbers(std::string_view(body).substr(colon + 1));
    if (kind == "identity" && args.empty()) {
      out.push_back(linear_branch(1.0, 0.0, w));
    } else if (kind == "linear" && args.size() == 2) {
      out.push_back(linear_branch(args[0], args[1], w));
    } else if (kind == "quadratic" && args.size() == 3) {
      out.push_back(quadratic_branch(args[0], args[1], args[2], w));
    } else {
      throw UsageError("cannot read branch '" + text + "'");
    }
  }
  if (weighted != 0 && weighted != texts.size()) {
    throw UsageError("give a weight to every branch or to none");
  }
  return out;
}

Source build_source(const DistFlags& f) {
  Source s;
  if (f.dist == "bvn") {
    if (!f.r) throw UsageError("--dist bvn needs --r");
    s.dist = NamedFamily{BivariateNormal(*f.r)};
  } else if (f.dist == "cauchy-circular") {
    s.dist = NamedFamily{CircularCauchy{}};
  } else if (f.dist == "independent") {
    s.dist = NamedFamily{IndependentProduct{parse_marginal(f.marginal_x), parse_marginal(f.marginal_y)}};
  } else if (f.dist == "discrete") {
    if (f.pmf.empty()) throw UsageError("--dist discrete needs --pmf");
    s.dist = io::read_pmf_file(f.pmf);
  } else if (f.dist == "curve") {
    s.dist = CurveSingularJoint::from_marginal(parse_marginal(f.marginal_x), parse_branches(f.branches));
  } else if (f.dist == "weierstrass-graph") {
    s.weierstrass = true;
  } else {
    throw UsageError("--dist is required");
  }
  return s;
}

const JointDistribution& need_joint(const Source& s, const char* cmd) {
  if (!s.dist) throw UsageError(std::string(cmd) + " does not accept --dist weierstrass-graph");
  return *s.dist;
}

void add_dist_flags(CLI::App* app, DistFlags& f) {
  app->add_option("--dist", f.dist, "Distribution")
      ->check(CLI::IsMember({"bvn", "cauchy-circular", "independent", "discrete", "curve",
                             "weierstrass-graph"}));
  app->add_option("--r", f.r, "Correlation of the bivariate normal");
  app->add_option("--marginal-x", f.marginal_x, "normal:m,s | uniform:a,b | cauchy:l,s | exponential:rate")
      ->capture_default_str();
  app->add_option("--marginal-y", f.marginal_y, "As --marginal-x")->capture_default_str();
  app->add_option("--pmf", f.pmf, "Discrete pmf CSV");
  app->add_option("--branch", f.branches, "identity | linear:a,b | quadratic:a,b,c, each with optional @weight");
  app->add_option("--n-terms", f.n_terms, "Weierstrass truncation")->capture_default_str();
}

void add_grid_flags(CLI::App* app, GridFlags& g) {
  g.opts.insert(g.opts.end(), {
      app->add_option("--xmin", g.xmin)->capture_default_str(),
      app->add_option("--xmax", g.xmax)->capture_default_str(),
      app->add_option("--nx", g.nx)->capture_default_str(),
      app->add_option("--ymin", g.ymin)->capture_default_str(),
      app->add_option("--ymax", g.ymax)->capture_default_str(),
      app->add_option("--ny", g.ny)->capture_default_str(),
  });
}

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream file(path);
  if (!file) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  write(file);
  if (!file) fail(ErrorCode::IoError, "write to " + path + " failed");
}

std::vector<Point> samples_from(const std::string& path, const Source* src, std::size_t n,
                                std::uint64_t seed, int n_terms) {
  if (!path.empty()) return io::read_samples_file(path);
  if (!src) throw UsageError("give --samples or --dist");
  if (src->weierstrass) return sample_weierstrass_graph(WeierstrassCurve{n_terms}, n, seed);
  return sample(*src->dist, n, seed);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local lift dependence toolkit", "liftscale"};
  app.require_subcommand(1);
  app.fallthrough(false);

  DistFlags dist;
  GridFlags grid;
  std::string out_path = "-";
  std::string format = "json";
  std::string samples_path;
  double tol = kAnalyticTol;
  std::uint64_t seed = 42;
  std::size_t n = 100000;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output path, - for stdout")->capture_default_str();
  };

  auto* lift_cmd = app.add_subcommand("lift-grid", "Lift values and labels on a grid (CSV)");
  add_dist_flags(lift_cmd, dist);
  add_grid_flags(lift_cmd, grid);
  lift_cmd->add_option("--tol", tol, "Neutral band half-width")->check(CLI::PositiveNumber);
  common(lift_cmd);

  std::string mi_method = "auto";
  bool mc_fallback = false;
  double smoothing_mi = 0.0;
  auto* mi_cmd = app.add_subcommand("mi", "Mutual information (JSON)");
  add_dist_flags(mi_cmd, dist);
  mi_cmd->add_option("--method", mi_method)
      ->check(CLI::IsMember({"auto", "quadrature", "closed-form", "monte-carlo"}))
      ->capture_default_str();
  mi_cmd->add_flag("--mc-fallback", mc_fallback, "Fall back to Monte Carlo if quadrature stalls");
  mi_cmd->add_option("--samples", samples_path, "Sample CSV; tabulated exactly");
  mi_cmd->add_option("--smoothing", smoothing_mi)->check(CLI::NonNegativeNumber)->capture_default_str();
  mi_cmd->add_option("--n", n, "Monte Carlo draws")->check(CLI::PositiveNumber);
  mi_cmd->add_option("--seed", seed)->capture_default_str();
  common(mi_cmd);

  auto* regions_cmd = app.add_subcommand("regions", "Masses of the lift and inhibition sets (JSON)");
  add_dist_flags(regions_cmd, dist);
  regions_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);
  common(regions_cmd);

  std::optional<double> px, py;
  auto* sibuya_cmd = app.add_subcommand("sibuya", "Sibuya dependence function (CSV)");
  add_dist_flags(sibuya_cmd, dist);
  add_grid_flags(sibuya_cmd, grid);
  sibuya_cmd->add_option("--x", px, "Single point x");
  sibuya_cmd->add_option("--y", py, "Single point y");
  sibuya_cmd->add_option("--samples", samples_path, "Empirical version from a sample CSV");
  common(sibuya_cmd);

  std::optional<double> target_y, target_lo, target_hi;
  auto* target_cmd = app.add_subcommand("target", "Best profile for a target outcome (JSON)");
  add_dist_flags(target_cmd, dist);
  add_grid_flags(target_cmd, grid);
  target_cmd->add_option("--target-y", target_y, "Target label (discrete)");
  target_cmd->add_option("--target-lo", target_lo, "Target interval start (continuous)");
  target_cmd->add_option("--target-hi", target_hi, "Target interval end (continuous)");
  target_cmd->add_option("--samples", samples_path, "Tabulate a sample CSV instead");
  common(target_cmd);

  double cx = 0.0, cy = 0.0, eps_max = 0.1, eps_min = 1e-3;
  std::size_t k = 12;
  auto* scaling_cmd = app.add_subcommand("scaling", "Local scaling exponent from ball counts");
  add_dist_flags(scaling_cmd, dist);
  scaling_cmd->add_option("--samples", samples_path, "Sample CSV");
  scaling_cmd->add_option("--n", n, "Draws when sampling --dist")->check(CLI::PositiveNumber)->capture_default_str();
  scaling_cmd->add_option("--seed", seed)->capture_default_str();
  scaling_cmd->add_option("--cx", cx)->required();
  scaling_cmd->add_option("--cy", cy)->required();
  scaling_cmd->add_option("--eps-max", eps_max)->check(CLI::PositiveNumber)->capture_default_str();
  scaling_cmd->add_option("--eps-min", eps_min)->check(CLI::PositiveNumber)->capture_default_str();
  scaling_cmd->add_option("--k", k, "Number of radii")->capture_default_str();
  scaling_cmd->add_option("--format", format, "json: estimate, csv: profile")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  common(scaling_cmd);

  std::size_t n_points = 1001;
  int n_terms = 30;
  auto* weier_cmd = app.add_subcommand("weierstrass", "Weierstrass function on [0, 1/2] (CSV)");
  weier_cmd->add_option("--n-points", n_points)->capture_default_str();
  weier_cmd->add_option("--n-terms", n_terms)->capture_default_str();
  common(weier_cmd);

  std::vector<double> schedule{0.9, 0.99, 0.999};
  auto* counter_cmd = app.add_subcommand("counterexample", "MI along a BVN schedule vs its singular limit (CSV)");
  counter_cmd->add_option("--r-schedule", schedule, "Comma separated correlations")
      ->delimiter(',')
      ->expected(0, -1)
      ->capture_default_str();
  common(counter_cmd);

  std::string est_method = "kernel", bw_rule = "silverman";
  double hx = 0.0, hy = 0.0, smoothing = kDefaultSmoothing;
  auto* est_cmd = app.add_subcommand("estimate-lift", "Lift estimated from samples (CSV)");
  add_dist_flags(est_cmd, dist);
  add_grid_flags(est_cmd, grid);
  est_cmd->add_option("--samples", samples_path, "Sample CSV");
  est_cmd->add_option("--n", n, "Draws when sampling --dist")->check(CLI::PositiveNumber)->capture_default_str();
  est_cmd->add_option("--seed", seed)->capture_default_str();
  est_cmd->add_option("--method", est_method)->check(CLI::IsMember({"kernel", "discrete"}))->capture_default_str();
  est_cmd->add_option("--bandwidth", bw_rule)->check(CLI::IsMember({"silverman", "fixed"}))->capture_default_str();
  est_cmd->add_option("--hx", hx)->check(CLI::PositiveNumber);
  est_cmd->add_option("--hy", hy)->check(CLI::PositiveNumber);
  est_cmd->add_option("--smoothing", smoothing)->check(CLI::NonNegativeNumber)->capture_default_str();
  auto* est_tol = est_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);
  common(est_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "Draw from a distribution (CSV)");
  add_dist_flags(sample_cmd, dist);
  sample_cmd->add_option("--n", n)->check(CLI::PositiveNumber)->capture_default_str();
  sample_cmd->add_option("--seed", seed)->capture_default_str();
  common(sample_cmd);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 2;
  }

  try {
    if (*weier_cmd) {
      if (n_terms < 1) throw UsageError("--n-terms must be >= 1");
      if (n_points < 2) throw UsageError("--n-points must be >= 2");
      const auto pts = weierstrass_grid(WeierstrassCurve{n_terms}, n_points);
      emit(out_path, out, [&](std::ostream& o) { io::write_weierstrass_csv(o, pts); });
      return 0;
    }
    if (*counter_cmd) {
      const auto rows = convergence_counterexample(schedule);
      emit(out_path, out, [&](std::ostream& o) { io::write_counterexample_csv(o, rows); });
      return 0;
    }

    if (*lift_cmd) {
      const Source src = build_source(dist);
      const auto& joint = need_joint(src, "lift-grid");
      LiftField field;
      const auto* d = std::get_if<DiscreteJoint>(&joint);
      if (d && !grid.given()) {
        field = discrete_lift(*d, tol);
      } else {
        field = lift_grid(joint, linspace(grid.xmin, grid.xmax, grid.nx),
                          linspace(grid.ymin, grid.ymax, grid.ny), tol);
      }
      emit(out_path, out, [&](std::ostream& o) { io::write_lift_field_csv(o, field); });
      return 0;
    }

    if (*mi_cmd) {
      MiReport rep;
      if (!samples_path.empty()) {
        const auto pts = io::read_samples_file(samples_path);
        rep = empirical_mi(ContingencyTable::from_samples(pts), smoothing_mi);
      } else {
        const Source src = build_source(dist);
        const auto& joint = need_joint(src, "mi");
        MiOptions opt;
        opt.monte_carlo_fallback = mc_fallback;
        opt.monte_carlo_samples = n;
        opt.seed = seed;
        const auto* fam = std::get_if<NamedFamily>(&joint);
        if (mi_method == "auto") {
          rep = mutual_information(joint, opt);
        } else if (mi_method == "closed-form") {
          const auto* b = fam ? std::get_if<BivariateNormal>(fam) : nullptr;
          if (!b) throw UsageError("--method closed-form is only available for --dist bvn");
          rep = mi_bvn_closed_form(b->r);
        } else if (mi_method == "quadrature") {
          if (!fam) throw UsageError("--method quadrature needs a named continuous family");
          rep = mi_continuous(*fam, opt);
        } else {
          rep = mi_monte_carlo(joint, n, seed);
        }
      }
      emit(out_path, out, [&](std::ostream& o) { o << io::to_json(rep) << '\n'; });
      return 0;
    }

    if (*regions_cmd) {
      const Source src = build_source(dist);
      const auto summary = region_summary(need_joint(src, "regions"), tol);
      emit(out_path, out, [&](std::ostream& o) { o << io::to_json(summary) << '\n'; });
      return 0;
    }

    if (*sibuya_cmd) {
      if (px.has_value() != py.has_value()) throw UsageError("give both --x and --y");
      std::vector<double> gx, gy;
      if (px) {
        gx = {*px};
        gy = {*py};
      } else {
        gx = linspace(grid.xmin, grid.xmax, grid.nx);
        gy = linspace(grid.ymin, grid.ymax, grid.ny);
      }
      std::vector<Point> pts;
      std::optional<Source> src;
      if (!samples_path.empty()) {
        pts = io::read_samples_file(samples_path);
      } else {
        src = build_source(dist);
        need_joint(*src, "sibuya");
      }
      emit(out_path, out, [&](std::ostream& o) {
        o << "x,y,omega\n";
        for (double x : gx) {
          for (double y : gy) {
            double v;
            try {
              v = src ? sibuya_omega_at(*src->dist, x, y) : empirical_sibuya(pts, x, y);
            } catch (const Error& e) {
              if (e.code() != ErrorCode::UndefinedAtPoint) throw;
              v = std::nan("");
            }
            o << io::format_double(x) << ',' << io::format_double(y) << ','
              << io::format_double(v) << '\n';
          }
        }
      });
      return 0;
    }

    if (*target_cmd) {
      TargetingResult res;
      if (!samples_path.empty()) {
        if (!target_y) throw UsageError("--samples targeting needs --target-y");
        res = target_profile(ContingencyTable::from_samples(io::read_samples_file(samples_path)), *target_y);
      } else {
        const Source src = build_source(dist);
        const auto& joint = need_joint(src, "target");
        if (const auto* d = std::get_if<DiscreteJoint>(&joint)) {
          if (!target_y) throw UsageError("discrete targeting needs --target-y");
          res = target_profile(*d, *target_y);
        } else {
          if (!target_lo || !target_hi) throw UsageError("continuous targeting needs --target-lo and --target-hi");
          const auto xs = linspace(grid.xmin, grid.xmax, grid.nx);
          if (const auto* f = std::get_if<NamedFamily>(&joint)) {
            res = target_profile(*f, *target_lo, *target_hi, xs);
          } else if (const auto* c = std::get_if<ContinuousJoint>(&joint)) {
            res = target_profile(*c, *target_lo, *target_hi, xs);
          } else {
            throw UsageError("targeting needs a discrete or absolutely continuous law");
          }
        }
      }
      emit(out_path, out, [&](std::ostream& o) { o << io::to_json(res) << '\n'; });
      return 0;
    }

    if (*scaling_cmd) {
      std::optional<Source> src;
      if (samples_path.empty()) src = build_source(dist);
      dist.n_terms = std::max(dist.n_terms, 1);
      const auto pts = samples_from(samples_path, src ? &*src : nullptr, n, seed, dist.n_terms);
      const auto prof = ball_profile(pts, {cx, cy}, eps_max, eps_min, k);
      if (format == "csv") {
        emit(out_path, out, [&](std::ostream& o) { io::write_profile_csv(o, prof); });
      } else {
        const auto est = scaling_exponent(prof);
        emit(out_path, out, [&](std::ostream& o) { o << io::to_json(est) << '\n'; });
      }
      return 0;
    }

    if (*est_cmd) {
      std::optional<Source> src;
      if (samples_path.empty()) src = build_source(dist);
      const auto pts = samples_from(samples_path, src ? &*src : nullptr, n, seed, dist.n_terms);
      const double t = est_tol->count() ? tol : kEstimatedTol;
      LiftField field;
      if (est_method == "discrete") {
        field = empirical_discrete_lift(ContingencyTable::from_samples(pts), smoothing, t);
      } else {
        Bandwidth bw = Bandwidth::silverman();
        if (bw_rule == "fixed") {
          if (!(hx > 0.0) || !(hy > 0.0)) throw UsageError("--bandwidth fixed needs --hx and --hy");
          bw = Bandwidth::fixed(hx, hy);
        }
        field = kernel_lift(pts, linspace(grid.xmin, grid.xmax, grid.nx),
                            linspace(grid.ymin, grid.ymax, grid.ny), bw, t)
                    .field;
      }
      emit(out_path, out, [&](std::ostream& o) { io::write_lift_field_csv(o, field); });
      return 0;
    }

    if (*sample_cmd) {
      const Source src = build_source(dist);
      const auto pts = samples_from("", &src, n, seed, dist.n_terms);
      emit(out_path, out, [&](std::ostream& o) { io::write_samples_csv(o, pts); });
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 2;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace liftscale::cli
