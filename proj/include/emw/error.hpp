#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emw {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that does not match the expected schema.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A reference (bus id, line id) that does not resolve.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

/// Structural problem in an otherwise parseable case (e.g. islanded component).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative or time-stepping failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double final_mismatch)
      : NumericalError(what), final_mismatch_(final_mismatch) {}
  double final_mismatch() const noexcept { return final_mismatch_; }

 private:
  double final_mismatch_;
};

class InstabilityError : public NumericalError {
 public:
  InstabilityError(const std::string& what, std::size_t step, std::size_t index)
      : NumericalError(what), step_(step), index_(index) {}
  std::size_t step() const noexcept { return step_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t step_;
  std::size_t index_;
};

}  // namespace emw
