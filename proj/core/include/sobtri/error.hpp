#pragma once

#include <stdexcept>
#include <string>

namespace sobtri {

/// Base of every error raised by the library. Callers that only care about
/// "did the numerics refuse this input" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-positive or non-finite triangle slope.
class DomainParameterError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument outside its admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Spectral parameter on (or within the guard band of) the branch threshold.
class DegenerateParameterError : public Error {
 public:
  using Error::Error;
};

/// Operation requested for the wrong spectral branch.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the region an operation is defined on.
class RegionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation too close to the accumulation corner.
class CornerSingularityError : public Error {
 public:
  using Error::Error;
};

/// Malformed profile, window, grid or config input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The quadrature plan needed for the requested accuracy exceeds the budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// Quotient of a zero field.
class UndefinedQuotientError : public Error {
 public:
  using Error::Error;
};

}  // namespace sobtri
