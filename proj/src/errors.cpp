#include "rbtlse/errors.hpp"

namespace rbtlse {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::GapConditionFailed: return "GapConditionFailed";
    case ErrorCode::BlockNotInvertible: return "BlockNotInvertible";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::ConditioningUndefined: return "ConditioningUndefined";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool Error::is_solver_error() const noexcept {
  switch (code_) {
    case ErrorCode::AssumptionViolated:
    case ErrorCode::GapConditionFailed:
    case ErrorCode::BlockNotInvertible:
    case ErrorCode::DegenerateSpectrum:
    case ErrorCode::ConditioningUndefined:
    case ErrorCode::SizeLimit:
    case ErrorCode::NonConvergence:
      return true;
    default:
      return false;
  }
}

}  // namespace rbtlse
