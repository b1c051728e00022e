#pragma once

#include <stdexcept>
#include <string>

namespace contnet {

// Input or geometry outside the operation's domain (negative flows, paths
// leaving the grid, unreachable origins).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model or solver parameter.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed file contents. `line()` is 1-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        message_(what),
        line_(line) {}
  int line() const noexcept { return line_; }
  // Message without the line prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  int line_;
};

// Iterative method failed (no convergence, descent violated, NaN).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The closed-form path oracle has no answer for this geometry.
class UnsupportedGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace contnet
