#include "liftscale/error.hpp"

namespace liftscale {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::CurveSingularHasNoDensity: return "CurveSingularHasNoDensity";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::DegenerateCorrelation: return "DegenerateCorrelation";
    case ErrorCode::NonMonotonePiece: return "NonMonotonePiece";
    case ErrorCode::DerivativeVanishes: return "DerivativeVanishes";
    case ErrorCode::UndefinedAtPoint: return "UndefinedAtPoint";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::InsufficientRadii: return "InsufficientRadii";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::MinSampleSize: return "MinSampleSize";
    case ErrorCode::TargetHasZeroMass: return "TargetHasZeroMass";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace liftscale
