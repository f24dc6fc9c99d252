#pragma once

#include <stdexcept>
#include <string>

namespace varflow {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (bad JSON, invalid network).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller-side precondition was not met.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Exhaustive cut enumeration was requested above the vertex cap.
class LimitExceeded : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Stable bounds were requested for a network whose min cut is not stable.
class NotStableError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Something that must hold by construction did not.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace varflow
