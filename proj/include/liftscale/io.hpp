#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "liftscale/distributions.hpp"
#include "liftscale/estimate.hpp"
#include "liftscale/infomeasure.hpp"
#include "liftscale/lift.hpp"
#include "liftscale/scaling.hpp"

namespace liftscale::io {

/// %.17g, with nan / inf / -inf spelled out.
std::string format_double(double v);

/// Strict decimal parse of the whole field (surrounding blanks allowed).
double parse_double(std::string_view field);

/// Header `<corner>,y:<label>,...`; each row `<x label>,<p>,...`.
DiscreteJoint read_pmf_csv(std::istream& in);
DiscreteJoint read_pmf_file(const std::string& path);

/// Header `x,y`.
std::vector<Point> read_samples_csv(std::istream& in);
std::vector<Point> read_samples_file(const std::string& path);
void write_samples_csv(std::ostream& out, const std::vector<Point>& points);

/// `x,y,L,label`, row-major over the grid.
void write_lift_field_csv(std::ostream& out, const LiftField& field);

/// `eps,count,rho_eps`
void write_profile_csv(std::ostream& out, const BallDensityProfile& profile);

/// `r,mi,limit_mi,exceeds`
void write_counterexample_csv(std::ostream& out, const std::vector<CounterexampleRow>& rows);

/// `x,w`
void write_weierstrass_csv(std::ostream& out, const std::vector<Point>& points);

// JSON documents, serialized with shortest round-trip floats.
std::string to_json(const MiReport& report);
std::string to_json(const RegionSummary& summary);
std::string to_json(const TargetingResult& result);
std::string to_json(const ScalingEstimate& estimate);

}  // namespace liftscale::io
