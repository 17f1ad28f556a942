#pragma once

#include <stdexcept>
#include <string>

namespace qent {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or physics parameters (gap violated, unknown name, bad schema).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A Hilbert space or replica tensor would exceed the amplitude cap.
class CapacityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Solver non-convergence, vanishing norms, invariant violations detected at runtime.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Operands live on different bases or have incompatible shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace qent
