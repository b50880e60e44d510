#pragma once

#include <stdexcept>
#include <string>

namespace hrvlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters in a law, generator spec or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation's preconditions (sizes, k ranges, names).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed external data (CSV, JSON documents).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace hrvlab
