#pragma once

#include <stdexcept>
#include <string>

namespace apxgrp {

// Process exit codes of the experiment CLI. Each exception class below maps
// onto exactly one of them.
enum class ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kResourceExceeded = 3,
  kInvariantViolation = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
  virtual const char* kind() const noexcept = 0;
};

/// Bad arguments: mismatched ambient parameters, malformed matrices, a set
/// that is not symmetric where symmetry is required, bad config values.
class UsageError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfigError; }
  const char* kind() const noexcept override { return "usage"; }
};

/// Parameters outside the supported regime (e.g. characteristic p <= n).
class UnsupportedError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfigError; }
  const char* kind() const noexcept override { return "unsupported"; }
};

/// The element budget was exceeded. Never silently truncated.
class ResourceError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kResourceExceeded; }
  const char* kind() const noexcept override { return "resource"; }
};

/// An internal consistency check failed (a bug, not bad input).
class InvariantError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kInvariantViolation; }
  const char* kind() const noexcept override { return "invariant"; }
};

}  // namespace apxgrp
