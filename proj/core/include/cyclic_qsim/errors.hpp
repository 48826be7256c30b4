#pragma once

#include <stdexcept>
#include <string>

namespace cqsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition (bad interval, n out of range, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The request is well formed but exceeds a size guard or is unsupported for the model.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant was broken (e.g. a clearly negative Gram eigenvalue).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Orthonormal completion of a circuit block failed.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqsim
