#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qghot {

enum class ErrorCode {
  // input / validation
  DisconnectedGraph,
  NonpositiveLength,
  DuplicateId,
  DanglingEndpoint,
  InvalidPoint,
  UnknownExample,
  BadParameter,
  PreconditionUnmet,
  NotAStar,
  NoBoundary,
  InapplicableCheck,
  MeshTooCoarse,
  ZeroFunction,
  ZeroEigenfunction,
  TooFarApart,
  NotMaxima,
  NotSimple,
  ExtremumAtVertexValueZero,
  ShorteningTooLarge,
  // numerical
  BackendDisagreement,
  ScanExhausted,
  NullspaceDimensionMismatch,
  LimitEigenvalueMultiple,
  NoWitnessFound,
  MultiplicityChange,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonpositiveLength: return "NonpositiveLength";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::NotAStar: return "NotAStar";
    case ErrorCode::NoBoundary: return "NoBoundary";
    case ErrorCode::InapplicableCheck: return "InapplicableCheck";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::ZeroEigenfunction: return "ZeroEigenfunction";
    case ErrorCode::TooFarApart: return "TooFarApart";
    case ErrorCode::NotMaxima: return "NotMaxima";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::ExtremumAtVertexValueZero: return "ExtremumAtVertexValueZero";
    case ErrorCode::ShorteningTooLarge: return "ShorteningTooLarge";
    case ErrorCode::BackendDisagreement: return "BackendDisagreement";
    case ErrorCode::ScanExhausted: return "ScanExhausted";
    case ErrorCode::NullspaceDimensionMismatch: return "NullspaceDimensionMismatch";
    case ErrorCode::LimitEigenvalueMultiple: return "LimitEigenvalueMultiple";
    case ErrorCode::NoWitnessFound: return "NoWitnessFound";
    case ErrorCode::MultiplicityChange: return "MultiplicityChange";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to a distinct CLI exit code.
inline bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::BackendDisagreement:
    case ErrorCode::ScanExhausted:
    case ErrorCode::NullspaceDimensionMismatch:
    case ErrorCode::LimitEigenvalueMultiple:
    case ErrorCode::NoWitnessFound:
    case ErrorCode::MultiplicityChange:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace qghot
