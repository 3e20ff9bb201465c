#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ridgepois {

enum class ErrorCode {
  InvalidArgument,
  NonNegativeZ,
  NumericalBranchFailure,
  SingularDerivativeDenominator,
  InvalidLambda,
  NegativeVariance,
  InterpolationThreshold,
  ThetaOutOfRange,
  NonPositiveLambda,
  SolveFailure,
  InnerSingular,
  DimensionTooLarge,
  EmptyGroup,
  BadMagic,
  TruncatedFile,
  CountMismatch,
  NoSamplesForDigit,
  PatchOutOfBounds,
  SubsampleTooLarge,
  SchemaMismatch,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonNegativeZ: return "NonNegativeZ";
    case ErrorCode::NumericalBranchFailure: return "NumericalBranchFailure";
    case ErrorCode::SingularDerivativeDenominator: return "SingularDerivativeDenominator";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::NegativeVariance: return "NegativeVariance";
    case ErrorCode::InterpolationThreshold: return "InterpolationThreshold";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::InnerSingular: return "InnerSingular";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::NoSamplesForDigit: return "NoSamplesForDigit";
    case ErrorCode::PatchOutOfBounds: return "PatchOutOfBounds";
    case ErrorCode::SubsampleTooLarge: return "SubsampleTooLarge";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ridgepois
