#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace comb {

enum class ErrorCode {
  UnknownGenerator,
  InvalidGenerators,
  BallTooLarge,
  AlphabetMismatch,
  ModeViolation,
  TargetOutsideBall,
  DistanceCutoffExceeded,
  NotRegular,
  NotNormal,
  IndexNotFinite,
  LengthNotEqualizable,
  SynchronousRequiresBijective,
  WitnessPartitionViolation,
  MissingLookup,
  InvalidParams,
  NotFoundWithinBound,
  Parse,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::InvalidGenerators: return "InvalidGenerators";
    case ErrorCode::BallTooLarge: return "BallTooLarge";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::ModeViolation: return "ModeViolation";
    case ErrorCode::TargetOutsideBall: return "TargetOutsideBall";
    case ErrorCode::DistanceCutoffExceeded: return "DistanceCutoffExceeded";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::IndexNotFinite: return "IndexNotFinite";
    case ErrorCode::LengthNotEqualizable: return "LengthNotEqualizable";
    case ErrorCode::SynchronousRequiresBijective: return "SynchronousRequiresBijective";
    case ErrorCode::WitnessPartitionViolation: return "WitnessPartitionViolation";
    case ErrorCode::MissingLookup: return "MissingLookup";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NotFoundWithinBound: return "NotFoundWithinBound";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace comb
