#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace capsym {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimension, non-finite values, bad options.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain where the operation is defined (e.g. gradient at 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition (e.g. positive values in a field
/// that must be non-positive).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Iterative method failed; the message carries diagnostics.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Cone or method combination that is not implemented.
class UnsupportedDomainError : public Error {
 public:
  using Error::Error;
};

/// The region reaches an outer face of the grid box, so measured quantities
/// would be truncated.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// Warnings go to stderr unless a sink is installed.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace capsym
