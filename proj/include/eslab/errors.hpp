#pragma once

#include <stdexcept>
#include <string>

namespace eslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: out-of-range degree, overflowing window, bad flag.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed its work or memory budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Inputs violate a mathematical precondition of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// File system failures; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace eslab
