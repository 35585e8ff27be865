#include "specoarse/error.hpp"

namespace specoarse {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InvalidAggregateCount: return "InvalidAggregateCount";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::RequiresNormalized: return "RequiresNormalized";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyEstimate: return "EmptyEstimate";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace specoarse
