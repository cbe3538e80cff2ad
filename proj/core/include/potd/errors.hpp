#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace potd {

enum class ErrorKind {
  kInvalidInput,
  kDegenerateInput,
  kConvergence,
  kNumeric,
  kFileNotFound,
  kParse,
  kMissingColumn,
  kSingleClass,
};

std::string_view to_string(ErrorKind kind);

/// Base class of every error thrown by the library. The kind is stable and
/// is what the CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& message)
      : Error(ErrorKind::kInvalidInput, message) {}
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& message)
      : Error(ErrorKind::kDegenerateInput, message) {}
};

/// Sinkhorn ran out of iterations. Carries the last observed marginal error.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double marginal_error, int iterations)
      : Error(ErrorKind::kConvergence, message),
        marginal_error_(marginal_error),
        iterations_(iterations) {}

  double marginal_error() const noexcept { return marginal_error_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double marginal_error_;
  int iterations_;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message) : Error(ErrorKind::kNumeric, message) {}
};

class FileNotFoundError : public Error {
 public:
  explicit FileNotFoundError(const std::string& message)
      : Error(ErrorKind::kFileNotFound, message) {}
};

/// Malformed CSV content. Row and column are 1-based and count the header
/// as row 1, so they match what a spreadsheet shows.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t row, std::size_t column)
      : Error(ErrorKind::kParse, message), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class MissingColumnError : public Error {
 public:
  explicit MissingColumnError(const std::string& message)
      : Error(ErrorKind::kMissingColumn, message) {}
};

class SingleClassError : public Error {
 public:
  explicit SingleClassError(const std::string& message)
      : Error(ErrorKind::kSingleClass, message) {}
};

}  // namespace potd
