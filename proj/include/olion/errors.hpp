// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace olion {

enum class ErrorCode {
  ZeroMatrix,
  ShapeMismatch,
  OutOfRange,
  InvalidRank,
  InvalidDim,
  InsufficientGrid,
  ConfigInvalid,
  IoError,
  NonFiniteLoss,
  VersionMismatch,
  CorruptCheckpoint,
  UnknownBlock,
};

/// Exception carrying a typed error code. ConfigInvalid maps to CLI exit
/// code 1, everything else to 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::InvalidDim: return "InvalidDim";
    case ErrorCode::InsufficientGrid: return "InsufficientGrid";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::UnknownBlock: return "UnknownBlock";
  }
  return "Unknown";
}

}  // namespace olion
