#include "sclrom/types.hpp"

namespace sclrom {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptySystem: return "EmptySystem";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::DegenerateHistory: return "DegenerateHistory";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

ZeroVectorError::ZeroVectorError(Index index)
    : Error(ErrorCode::ZeroVector, "vector " + std::to_string(index) + " has zero norm"),
      index_(index) {}

DegenerateHistoryError::DegenerateHistoryError(Index rank, Index columns)
    : Error(ErrorCode::DegenerateHistory,
            "numerical rank " + std::to_string(rank) + " < " + std::to_string(columns) +
                " snapshot columns"),
      rank_(rank) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& detail)
    : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                       std::to_string(column) + ": " + detail),
      line_(line),
      column_(column) {}

}  // namespace sclrom
