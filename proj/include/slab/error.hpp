#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slab {

enum class ErrorCode {
  NotMonic,
  Reducible,
  RamifiedOrBadPrime,
  PrecisionExhausted,
  UnsupportedFieldWithoutConfig,
  GeneratorInvariantViolated,
  ZeroComponent,
  WindowTooLarge,
  NonExactRepresentative,
  ShapeMismatch,
  TooFewSteps,
  NeedTwoPlaces,
  CyclicPositions,
  DependentFactors,
  TooFewWindows,
  DegenerateBasis,
  PrecisionBudgetExceeded,
  SchemaError,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::RamifiedOrBadPrime: return "RamifiedOrBadPrime";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::UnsupportedFieldWithoutConfig: return "UnsupportedFieldWithoutConfig";
    case ErrorCode::GeneratorInvariantViolated: return "GeneratorInvariantViolated";
    case ErrorCode::ZeroComponent: return "ZeroComponent";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::NonExactRepresentative: return "NonExactRepresentative";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooFewSteps: return "TooFewSteps";
    case ErrorCode::NeedTwoPlaces: return "NeedTwoPlaces";
    case ErrorCode::CyclicPositions: return "CyclicPositions";
    case ErrorCode::DependentFactors: return "DependentFactors";
    case ErrorCode::TooFewWindows: return "TooFewWindows";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::PrecisionBudgetExceeded: return "PrecisionBudgetExceeded";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace slab
