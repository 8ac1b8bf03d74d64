#pragma once

#include <stdexcept>
#include <string>

namespace hypsum {

// Base of every error thrown by the library. The CLI maps all of them to
// exit code 2 (domain/config violation).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument sits on (or within the pole tolerance of) a singularity.
class PoleError : public Error {
public:
  using Error::Error;
};

// Parameters violate a convergence or validity predicate.
class DomainError : public Error {
public:
  using Error::Error;
};

// Integer index or argument outside the supported range.
class RangeError : public Error {
public:
  using Error::Error;
};

// Unit-argument series whose parametric excess is not positive.
class DivergentError : public DomainError {
public:
  using DomainError::DomainError;
};

// A lower series parameter reaches a non-positive integer before any
// upper parameter truncates the series.
class ParameterPole : public PoleError {
public:
  using PoleError::PoleError;
};

// Closed form has a removable singularity and no limit policy was chosen.
class RemovableSingularity : public Error {
public:
  using Error::Error;
};

// Cooperative cancellation was requested during a long summation.
class Cancelled : public Error {
public:
  using Error::Error;
};

} // namespace hypsum
