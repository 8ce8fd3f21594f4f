#pragma once

#include <stdexcept>
#include <string>

namespace schmidtwit {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Raised when an optimizer result contradicts an exactly known fact,
// e.g. no negative product value found where the spectrum demands one.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace schmidtwit
