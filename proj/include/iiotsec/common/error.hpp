#pragma once

#include <stdexcept>
#include <string>

namespace iiotsec {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: unreadable files, malformed rows, schema mismatches.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or arguments supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation was invoked on an object that is not ready for it
/// (transform before fit, backward before forward, ...).
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace iiotsec
