#pragma once

#include <stdexcept>
#include <string>

namespace scl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad grid size, eps <= 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The computation produced non-finite values and was stopped.
class NumericalAbort : public Error {
 public:
  using Error::Error;
};

/// A pre-caustic operation reached a point where the flow Jacobian vanishes,
/// or a stationary point is degenerate.
class CausticError : public Error {
 public:
  using Error::Error;
};

/// A quadrature or grid cannot resolve the requested oscillation scale.
class UnderResolved : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration input. `line()` is 0 when not tied to a file line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace scl
