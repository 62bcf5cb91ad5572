#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spe {

enum class ErrorCode {
  ZeroNorm,
  InvalidState,
  WeightOutOfRange,
  InvalidFilter,
  EpsOutOfRange,
  EtaOutOfRange,
  QuadratureFailure,
  UnnormalizedWeights,
  TooLarge,
  EmptyCounts,
  ParamOutOfRange,
  InsufficientSamples,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::InvalidFilter: return "InvalidFilter";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::UnnormalizedWeights: return "UnnormalizedWeights";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyCounts: return "EmptyCounts";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Single exception type for every domain error; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spe
