#pragma once

#include <stdexcept>
#include <string>

namespace twave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or grid descriptions.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The linear part L could not be factorized or inverted.
class SingularOperatorError : public Error {
 public:
  using Error::Error;
};

/// The denominator of a stabilizing factor vanished (relative to its scale).
class DegenerateDenominatorError : public Error {
 public:
  using Error::Error;
};

/// A stabilizing factor would be raised from a negative base to a non-integer power.
class NegativeBaseError : public Error {
 public:
  using Error::Error;
};

/// A stabilizing factor violates |p + q| < 1 for the paired problem.
class PropertyViolationError : public Error {
 public:
  using Error::Error;
};

/// The Newton Jacobian was singular in a way the least-squares fallback could not repair.
class SingularJacobianError : public Error {
 public:
  using Error::Error;
};

/// Ill-conditioned Gram matrix in an error decomposition.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or factor descriptor.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace twave
