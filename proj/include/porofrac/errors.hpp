#pragma once

#include <stdexcept>
#include <string>

namespace porofrac {

/// Invalid material parameters or scenario configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// NaN/Inf or other numerical breakdown inside a kernel.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A local or global Newton iteration failed to converge.
struct ConvergenceError : NumericalError {
  ConvergenceError(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

/// Element-level assembly failure (degenerate Jacobian, singular block).
struct AssemblyError : std::runtime_error {
  AssemblyError(const std::string& what, int element)
      : std::runtime_error(what), element(element) {}
  int element;
};

/// File I/O failure, carries the offending path in the message.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace porofrac
