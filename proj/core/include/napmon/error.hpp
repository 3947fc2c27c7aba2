#pragma once

#include <stdexcept>
#include <string>

namespace napmon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text or binary. `where()` names the line, byte offset or
/// field path of the problem.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Vector or matrix sizes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or argument value (negative radius, bad layer pair,
/// non-increasing thresholds, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A monitor was paired with a network other than the one it was built on.
class FingerprintMismatch : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace napmon
