#pragma once

#include <stdexcept>
#include <string>

namespace adgen {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable, or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input data violates a schema or invariant. Messages name the offending
// field and, for line-delimited files, the 1-based line number.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace adgen
