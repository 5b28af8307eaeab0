#pragma once

#include <stdexcept>
#include <string>

namespace lalg {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or indices that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the domain of a scalar (pole, negative square root, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural identity (Jacobi, flatness, invariance, ...) does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input; `column` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace lalg
