#pragma once

#include <stdexcept>
#include <string>

namespace mlmcfv {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad configuration values, unsupported options.
/// The driver maps these to exit status 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition failed while solving (monotonicity, CFL,
/// inversion, degenerate geometry). The driver maps these to exit status 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class OutOfMonotoneRange : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MonotonicityViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CflViolation : public NumericalError {
 public:
  CflViolation(const std::string& what, double max_speed)
      : NumericalError(what), max_speed_(max_speed) {}
  double max_speed() const noexcept { return max_speed_; }

 private:
  double max_speed_;
};

class DegenerateSubdomain : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroReference : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateFit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvalidTolerance : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnsupportedDimension : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace mlmcfv
