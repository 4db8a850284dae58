#include "shiftthermo/error.hpp"

namespace shiftthermo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::Undecided: return "UNDECIDED";
    case ErrorCode::WrongCase: return "WRONG_CASE";
    case ErrorCode::InsufficientDepth: return "INSUFFICIENT_DEPTH";
    case ErrorCode::DepthUnderflow: return "DEPTH_UNDERFLOW";
    case ErrorCode::DepthMismatch: return "DEPTH_MISMATCH";
    case ErrorCode::EmptyNonWandering: return "EMPTY_NW";
    case ErrorCode::NotNonCompact: return "NOT_NONCOMPACT";
    case ErrorCode::NonnegativePressure: return "NONNEGATIVE_PRESSURE";
    case ErrorCode::UnstableLimit: return "UNSTABLE_LIMIT";
    case ErrorCode::PressurePositive: return "PRESSURE_POSITIVE";
    case ErrorCode::PressureNotZero: return "PRESSURE_NOT_ZERO";
    case ErrorCode::BelowThreshold: return "BELOW_THRESHOLD";
    case ErrorCode::UnboundedPotential: return "UNBOUNDED_POTENTIAL";
    case ErrorCode::Divergent: return "DIVERGENT";
    case ErrorCode::BeamOverflow: return "BEAM_OVERFLOW";
  }
  return "UNKNOWN";
}

bool is_refusal(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::InsufficientDepth:
    case ErrorCode::DepthUnderflow:
    case ErrorCode::DepthMismatch:
      return false;
    default:
      return true;
  }
}

}  // namespace shiftthermo
