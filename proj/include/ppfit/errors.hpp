#pragma once

#include <stdexcept>
#include <string>

namespace ppfit {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or configuration (bad basis, k > d, empty data, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Evaluation point outside of the piecewise polynomial's domain.
class DomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

// Malformed input file contents.
class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, int line)
      : UsageError(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Under-determined least squares or singular correction system.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss encountered while training.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int epoch)
      : Error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppfit
