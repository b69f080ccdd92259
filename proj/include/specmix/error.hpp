#pragma once

#include <stdexcept>
#include <string>

namespace specmix {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pinned vertex does not exist or its colour is not in the vertex list.
class InvalidPinning : public Error {
 public:
  using Error::Error;
};

/// An enumeration or matrix would exceed the configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// No proper list colouring extends the requested (partial) configuration.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Detailed balance failed beyond tolerance.
class NotReversibleError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter lies outside the domain of a formula.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A structural precondition of an operation is violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (instance files, pinning strings, corpus specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace specmix
