#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sclrom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
  EmptySystem,
  ZeroVector,
  NotOrthogonal,
  DimensionMismatch,
  DimensionTooSmall,
  DegenerateHistory,
  NumericalFailure,
  InsufficientData,
  ConfigInvalid,
  IoFailure,
  BadMagic,
  ParseError,
  VersionUnsupported,
  InvariantViolation,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every error raised by the library. `code()` identifies the
/// failure class; the message carries the specifics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ZeroVectorError : public Error {
 public:
  explicit ZeroVectorError(Index index);
  Index index() const noexcept { return index_; }

 private:
  Index index_;
};

/// Raised when a snapshot history is rank deficient at the requested
/// tolerance. `rank()` is the numerical rank that was found.
class DegenerateHistoryError : public Error {
 public:
  DegenerateHistoryError(Index rank, Index columns);
  Index rank() const noexcept { return rank_; }

 private:
  Index rank_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& detail);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace sclrom
