#include "liftscale/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "liftscale/error.hpp"

namespace liftscale::io {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Next non-blank, non-comment line; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  std::ostringstream os;
  os << "line " << line_no << ": " << what;
  fail(ErrorCode::ParseError, os.str());
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return in;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    fail(ErrorCode::ParseError, "not a number: '" + std::string(field) + "'");
  }
  return v;
}

DiscreteJoint read_pmf_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) fail(ErrorCode::ParseError, "empty pmf file");
  const auto header = split(line);
  if (header.size() < 2) parse_fail(line_no, "header needs at least one y column");
  std::vector<double> ys;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto h = header[c];
    if (h.substr(0, 2) != "y:") parse_fail(line_no, "y columns must look like y:<label>");
    try {
      ys.push_back(parse_double(h.substr(2)));
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
  }
  std::vector<double> xs, pmf;
  while (next_line(in, line, line_no)) {
    const auto cells = split(line);
    if (cells.size() != header.size()) parse_fail(line_no, "row width differs from header");
    try {
      xs.push_back(parse_double(cells[0]));
      for (std::size_t c = 1; c < cells.size(); ++c) pmf.push_back(parse_double(cells[c]));
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
  }
  if (xs.empty()) fail(ErrorCode::ParseError, "pmf file has no rows");
  return {std::move(xs), std::move(ys), std::move(pmf)};
}

DiscreteJoint read_pmf_file(const std::string& path) {
  auto in = open_input(path);
  return read_pmf_csv(in);
}

std::vector<Point> read_samples_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) fail(ErrorCode::ParseError, "empty sample file");
  const auto header = split(line);
  if (header.size() != 2 || header[0] != "x" || header[1] != "y") {
    parse_fail(line_no, "sample header must be x,y");
  }
  std::vector<Point> pts;
  while (next_line(in, line, line_no)) {
    const auto cells = split(line);
    if (cells.size() != 2) parse_fail(line_no, "expected two fields");
    try {
      pts.push_back({parse_double(cells[0]), parse_double(cells[1])});
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
  }
  return pts;
}

std::vector<Point> read_samples_file(const std::string& path) {
  auto in = open_input(path);
  return read_samples_csv(in);
}

void write_samples_csv(std::ostream& out, const std::vector<Point>& points) {
  out << "x,y\n";
  for (const auto& p : points) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

void write_lift_field_csv(std::ostream& out, const LiftField& field) {
  out << "x,y,L,label\n";
  for (std::size_t i = 0; i < field.nx(); ++i) {
    for (std::size_t j = 0; j < field.ny(); ++j) {
      out << format_double(field.grid_x[i]) << ',' << format_double(field.grid_y[j]) << ','
          << format_double(field.value(i, j)) << ',' << label_name(field.label(i, j)) << '\n';
    }
  }
}

void write_profile_csv(std::ostream& out, const BallDensityProfile& profile) {
  out << "eps,count,rho_eps\n";
  for (std::size_t k = 0; k < profile.radii.size(); ++k) {
    out << format_double(profile.radii[k]) << ',' << profile.counts[k] << ','
        << format_double(profile.densities[k]) << '\n';
  }
}

void write_counterexample_csv(std::ostream& out, const std::vector<CounterexampleRow>& rows) {
  out << "r,mi,limit_mi,exceeds\n";
  for (const auto& r : rows) {
    out << format_double(r.r) << ',' << format_double(r.mi) << ',' << format_double(r.limit_mi)
        << ',' << (r.exceeds ? 1 : 0) << '\n';
  }
}

void write_weierstrass_csv(std::ostream& out, const std::vector<Point>& points) {
  out << "x,w\n";
  for (const auto& p : points) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

std::string to_json(const MiReport& report) {
  json j;
  j["value"] = finite_or_null(report.value);
  j["method"] = std::string(method_name(report.method));
  j["abs_error_estimate"] = finite_or_null(report.abs_error_estimate);
  j["n_evals"] = report.n_evals;
  return j.dump(2);
}

std::string to_json(const RegionSummary& summary) {
  json j;
  j["mass_lift"] = summary.mass_lift;
  j["mass_inhibit"] = summary.mass_inhibit;
  j["mass_neutral"] = summary.mass_neutral;
  return j.dump(2);
}

std::string to_json(const TargetingResult& result) {
  json j;
  if (result.target_is_interval) {
    j["target_y"] = json::array({result.target_lo, result.target_hi});
  } else {
    j["target_y"] = result.target_lo;
  }
  j["x_opt"] = result.x_opt;
  j["lift_at_opt"] = finite_or_null(result.lift_at_opt);
  j["baseline_rate"] = result.baseline_rate;
  j["boosted_rate"] = result.boosted_rate;
  j["expected_extra_per_n"] = result.expected_extra_per_n;
  return j.dump(2);
}

std::string to_json(const ScalingEstimate& estimate) {
  json j;
  j["center"] = json::array({estimate.center.x, estimate.center.y});
  j["s_hat"] = finite_or_null(estimate.s_hat);
  j["fit_r2"] = finite_or_null(estimate.fit_r2);
  j["radii_used"] = estimate.radii_used;
  return j.dump(2);
}

}  // namespace liftscale::io
