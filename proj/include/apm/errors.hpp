#pragma once

#include <stdexcept>
#include <string>

namespace apm {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input family is (numerically) linearly dependent.
class DependentFamily : public Error {
 public:
  using Error::Error;
};

// An iterate acquired a NaN or Inf entry.
class NonFiniteIterate : public Error {
 public:
  using Error::Error;
};

// A point offered as a member of A∩B failed the membership check.
class NotFeasiblePoint : public Error {
 public:
  using Error::Error;
};

// A solver or analyzer was called on an input outside its hypotheses.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

// The requested procedure is not implemented for this input (e.g. N >= 3).
class Unsupported : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, descriptor document or command line value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace apm
