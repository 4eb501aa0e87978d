#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liftscale {

enum class ErrorCode {
  InvalidArgument,
  InvalidDistribution,
  CurveSingularHasNoDensity,
  OutOfSupport,
  DegenerateCorrelation,
  NonMonotonePiece,
  DerivativeVanishes,
  UndefinedAtPoint,
  QuadratureNotConverged,
  InsufficientRadii,
  DegenerateSample,
  MinSampleSize,
  TargetHasZeroMass,
  IoError,
  ParseError,
};

/// Stable machine-readable name, e.g. "DegenerateCorrelation".
std::string_view error_name(ErrorCode code) noexcept;

/// Every library failure is reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace liftscale
