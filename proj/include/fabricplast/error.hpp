#pragma once

#include <stdexcept>
#include <string>

namespace fabricplast {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Metric components that are not symmetric positive definite.
class InvalidMetricError : public Error {
 public:
  using Error::Error;
};

/// Two fiber families that are (numerically) parallel.
class DegenerateFiberError : public Error {
 public:
  using Error::Error;
};

/// Parameter set violating the material constructor invariants.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// A local Newton solve that did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what + " (residual " + std::to_string(residual) + " after " +
              std::to_string(iterations) + " iterations)"),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Internal inconsistency of an algorithm (e.g. a non-positive plastic multiplier).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Non-positive element Jacobian.
class ElementInversionError : public Error {
 public:
  using Error::Error;
};

/// Global Newton failure of the finite-element solver.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// Malformed input file (parameter JSON, curve CSV).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fabricplast
