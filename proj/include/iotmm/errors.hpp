#pragma once

#include <stdexcept>
#include <string>

namespace iotmm {

// Every failure the library raises, by contract name. Input-shaped problems
// (bad files, bad counts, bad config) are distinct from computations that are
// undefined for otherwise well-formed inputs; the CLI maps the former to exit
// code 2 and the latter to exit code 3.
enum class ErrorCode {
  // input / validation
  io_error,
  parse_error,
  validation_error,
  zero_population,
  count_exceeds_population,
  empty_history,
  unsupported_format,
  // computation
  zero_marginal,
  inconsistent_joint,
  complement_violation,
  degenerate_conditionals,
  out_of_range,
  underdetermined,
  zero_control_effectiveness,
  too_large,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::zero_population: return "ZeroPopulation";
    case ErrorCode::count_exceeds_population: return "CountExceedsPopulation";
    case ErrorCode::empty_history: return "EmptyHistory";
    case ErrorCode::unsupported_format: return "UnsupportedFormat";
    case ErrorCode::zero_marginal: return "ZeroMarginal";
    case ErrorCode::inconsistent_joint: return "InconsistentJoint";
    case ErrorCode::complement_violation: return "ComplementViolation";
    case ErrorCode::degenerate_conditionals: return "DegenerateConditionals";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::underdetermined: return "Underdetermined";
    case ErrorCode::zero_control_effectiveness: return "ZeroControlEffectiveness";
    case ErrorCode::too_large: return "TooLarge";
  }
  return "UnknownError";
}

constexpr bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::io_error:
    case ErrorCode::parse_error:
    case ErrorCode::validation_error:
    case ErrorCode::zero_population:
    case ErrorCode::count_exceeds_population:
    case ErrorCode::empty_history:
    case ErrorCode::unsupported_format:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace iotmm
