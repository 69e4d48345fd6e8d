#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kornlab {

enum class ErrorCode {
  NotSkew,
  ZeroDirection,
  NotTracelessSym,
  NotUnit,
  ZeroFrequency,
  BadGrid,
  RankMismatch,
  BadExponent,
  BandTooWide,
  UnderResolved,
  TooFewSamples,
  DegenerateGeometry,
  NoConvergence,
  UsageError,
  IoError,
  InvariantViolation,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::NotTracelessSym: return "NotTracelessSym";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::BandTooWide: return "BandTooWide";
    case ErrorCode::UnderResolved: return "UnderResolved";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kornlab
