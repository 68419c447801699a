#pragma once

#include <stdexcept>
#include <string>

namespace chsolve {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be turned into a valid profile or state.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A chart ordering invariant was broken (decreasing x, non-increasing beta).
class OrderingViolation : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf appeared in a state or a derived field.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// The requested beta span drops more energy than the truncation threshold.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// An iteration failed to reach its tolerance within the predicted budget.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// A diagnostic cannot be evaluated on the given state.
class DiagnosticUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace chsolve
