#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shiftthermo {

// Refusals (a mathematical precondition does not hold) are distinguished from
// input errors so the CLI can map them onto different exit codes.
enum class ErrorCode {
  InvalidInput,
  Undecided,
  WrongCase,
  InsufficientDepth,
  DepthUnderflow,
  DepthMismatch,
  EmptyNonWandering,
  NotNonCompact,
  NonnegativePressure,
  UnstableLimit,
  PressurePositive,
  PressureNotZero,
  BelowThreshold,
  UnboundedPotential,
  Divergent,
  BeamOverflow,
};

std::string_view to_string(ErrorCode code);

// True for codes that signal a refused precondition rather than bad input.
bool is_refusal(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shiftthermo
