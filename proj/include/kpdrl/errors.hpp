#pragma once

#include <stdexcept>
#include <string>

namespace kpdrl {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or out-of-range parameter.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when no line applies.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A computation would exceed a configured memory budget.
class ResourceError : public Error {
public:
  using Error::Error;
};

/// NaN or infinity showed up where a finite number is required.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Mismatched network / feature dimensions.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Internal consistency check failed (e.g. a heuristic beat the exact optimum).
class IntegrityError : public Error {
public:
  using Error::Error;
};

/// API called in a state where it is not allowed.
class UsageError : public Error {
public:
  using Error::Error;
};

} // namespace kpdrl
