#pragma once

#include <stdexcept>
#include <string>

namespace sheath {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid grid, parameter or option combination.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A solver failed to converge, or a non-finite value appeared.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// The zero-current wall equation has no root for the given inflow.
class NoSolutionError : public Error {
  public:
    using Error::Error;
};

/// Malformed configuration or data file. The message carries the line.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

  private:
    int line_;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace sheath
