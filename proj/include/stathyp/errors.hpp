#pragma once

#include <stdexcept>
#include <string>

namespace stathyp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinates that are not valid for their model (Im z <= 0, bad tree address, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter outside the operation's preconditions.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The requested measure or method is not available for this input.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A geodesic ray or segment was requested from coincident endpoints.
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A net does not cover the region it is asked to discretize.
class CoverageError : public Error {
 public:
  using Error::Error;
};

}  // namespace stathyp
