#pragma once

#include <stdexcept>
#include <string>

namespace ncavg {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotHermitian,
  NotDensity,
  NotUnitary,
  NoConvergence,
  ZeroFunctional,
  NotNormalized,
  OddDimension,
  EvenDimension,
  TargetOutsideDisk,
  DimensionTooSmall,
  ConvergenceFailure,
  Infeasible,
  BadK,
  BadP,
  UnreachableTarget,
  DepthTooLarge,
  EmptyProjection,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotDensity: return "NotDensity";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroFunctional: return "ZeroFunctional";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::EvenDimension: return "EvenDimension";
    case ErrorCode::TargetOutsideDisk: return "TargetOutsideDisk";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::BadP: return "BadP";
    case ErrorCode::UnreachableTarget: return "UnreachableTarget";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::EmptyProjection: return "EmptyProjection";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto process exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ncavg
