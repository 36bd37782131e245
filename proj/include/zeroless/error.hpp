#pragma once

#include <stdexcept>
#include <string>

namespace zeroless {

// Each error kind maps onto one CLI exit code (see harness.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two vectors or matrices built over different coordinate systems.
class BasisMismatch : public Error {
 public:
  using Error::Error;
};

// Bad parameters or malformed input records.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A size limit was hit (setting parameters, materialization budget,
// enumeration caps).
class GuardrailError : public Error {
 public:
  using Error::Error;
};

// An operation was called with inputs violating its stated contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Two choices disagree on a shared coordinate.
class MergeConflict : public Error {
 public:
  using Error::Error;
};

// A self-check failed; indicates a bug rather than a data condition.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace zeroless
