#pragma once

#include <stdexcept>
#include <string>

namespace specoarse {

enum class ErrorCode {
  IndexOutOfRange,
  DimensionMismatch,
  NotSquare,
  NotSymmetric,
  ParseError,
  UnsupportedFormat,
  InvalidAggregateCount,
  InvalidPartition,
  RequiresNormalized,
  NoConvergence,
  EmptyEstimate,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception. The code lets callers (the CLI in particular)
/// map failures onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specoarse
