#pragma once

#include <stdexcept>
#include <string>

namespace patina {

enum class ErrorCode {
  Io,
  Config,
  InvalidSeverity,
  InvalidQuality,
  MalformedFile,
  UnsupportedFormat,
  MalformedData,
  DimensionMismatch,
  UnknownOp,
  MissingParam,
  DuplicateImageId,
  ReplayMismatch,
  DegenerateBox,
  NotPatchAligned,
  ExternalCommandFailed,
  DetectorError,
  OutOfRange,
  NoStreams,
  IdMismatch,
  SingleClass,
  NegativeValue,
  AllZero,
  ZeroVector,
  ZeroVariance,
  EmptyInput,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::InvalidSeverity: return "InvalidSeverity";
    case ErrorCode::InvalidQuality: return "InvalidQuality";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MalformedData: return "MalformedData";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownOp: return "UnknownOp";
    case ErrorCode::MissingParam: return "MissingParam";
    case ErrorCode::DuplicateImageId: return "DuplicateImageId";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
    case ErrorCode::DegenerateBox: return "DegenerateBox";
    case ErrorCode::NotPatchAligned: return "NotPatchAligned";
    case ErrorCode::ExternalCommandFailed: return "ExternalCommandFailed";
    case ErrorCode::DetectorError: return "DetectorError";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoStreams: return "NoStreams";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

/// Single exception type for the whole library; `code()` distinguishes the
/// failure class so callers (and the CLI) can map errors to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace patina
