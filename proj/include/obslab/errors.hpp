#pragma once

#include <stdexcept>
#include <string>

namespace obslab {

// Precondition failures on caller-supplied values.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures that depend on the numerical state rather than the input
// contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The spectral truncation does not hold every eigenvalue a query needs.
class InsufficientTruncation : public Error {
 public:
  using Error::Error;
};

// The grid is too coarse to certify a measure-theoretic property.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// A supplied ball does not contain the spatial support of a set.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or a degenerate optimizer outcome.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An iterative method ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A time-optimal problem has no admissible control reaching the target.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// An asserted mathematical property failed on computed data.
class PropertyViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace obslab
