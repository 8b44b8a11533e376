#pragma once

#include <stdexcept>
#include <string>

namespace xlpc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver exhausted its budget or lost its bracket.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Parameters describe a configuration the model cannot support
/// (e.g. no finite horizon sustains cooperation).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace xlpc
