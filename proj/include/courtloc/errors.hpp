#pragma once

#include <stdexcept>
#include <string>

namespace courtloc {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input has the wrong dimensions/shape (channel count, vector length, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value violates its domain contract (non-binary mask input, bad range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// File system / stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. Carries a 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

// Corrupt or incompatible checkpoint file.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, undefined statistics, and similar numeric failures.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Integer overflow in exact arithmetic.
class OverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace courtloc
