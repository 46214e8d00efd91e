#pragma once

#include <stdexcept>
#include <string>

namespace eqk {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric argument outside the operation's domain (negative argument,
// dimension mismatch, non-finite input).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid configuration (bad family parameters, invalid k, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// The norm/space lacks a structural property the operation requires.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// inverse_solve target above the reachable finite values.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

// Point does not lie on the hyperplane within tolerance.
class MembershipError : public Error {
 public:
  using Error::Error;
};

// Input vector is identically zero where a direction is required.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A stated hypothesis on the coordinate functions is violated.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// The eps0 grid was exhausted without meeting the smoothness bound.
class SmoothnessBudgetError : public Error {
 public:
  using Error::Error;
};

// Parameter selection could not verify its defining inequalities.
class ParameterSelectionError : public Error {
 public:
  using Error::Error;
};

// The fixed-point map left its box; the problem is mis-parameterized.
class SelfMapAlarm : public Error {
 public:
  using Error::Error;
};

// An iterative solver failed to converge.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace eqk
