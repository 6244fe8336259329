#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnsl {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class DuplicateArcError : public Error {
 public:
  using Error::Error;
};

class MissingArcError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Raised when an exhaustive routine is asked to run beyond its size limit.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

class EmptyNeighbourhoodError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Semantic problems in otherwise well-formed input (bad CPT rows, cycles, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bnsl
