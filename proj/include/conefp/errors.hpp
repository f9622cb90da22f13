#ifndef CONEFP_ERRORS_HPP
#define CONEFP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace conefp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different cones or have different dimensions.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A point that must be interior (or a matrix that must be Hermitian/PSD)
/// is not.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed argument: empty schedule, alpha outside (0,1), bad permutation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// NaN produced, monotonicity broken mid-run, or growth not containable by
/// rescaling.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A solver precondition on the starting point does not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace conefp

#endif  // CONEFP_ERRORS_HPP
