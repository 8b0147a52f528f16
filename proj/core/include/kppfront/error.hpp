#pragma once

#include <stdexcept>
#include <string>

namespace kppfront {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs of an operation was violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// The requested object does not exist in this parameter regime
/// (for example a pulsating front when the Floquet eigenvalue is nonnegative).
class RegimeError : public Error {
public:
  using Error::Error;
};

/// An iterative method failed. Carries the last diagnostics it produced.
class NumericalError : public Error {
public:
  NumericalError(const std::string& what, double residual = 0.0, int iterations = 0)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

private:
  double residual_;
  int iterations_;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// A quantity that must stay positive did not.
class PositivityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// A dynamical classification stayed Undecided where a decision was needed.
class UndecidedError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace kppfront
