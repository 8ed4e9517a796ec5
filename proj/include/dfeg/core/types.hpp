#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dfeg {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operands of incompatible shape (grid sizes, matrix dimensions).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant broke during a run. The CLI maps this to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Probability reached the edge of the periodic box.
class BoundaryLeakError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Density matrix lost positivity beyond tolerance.
class PositivityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dfeg
