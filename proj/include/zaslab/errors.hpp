#pragma once

#include <stdexcept>
#include <string>

namespace zaslab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of the operation (r below r_min, bad parameters).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Tabulated profile queried outside its sample range.
class InterpolationError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance within the refinement budget.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A limit or extrapolation did not settle.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Regular-mass requested for a singularity without a regular resolution.
class NotRegularError : public Error {
 public:
  using Error::Error;
};

/// Harmonic function and surface do not belong together.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// Root finding on the area envelope failed to bracket.
class EnvelopeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input with out-of-range values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace zaslab
