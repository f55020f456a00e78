#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vampcf {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not chain (matmul inner dims, elementwise mismatch).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input outside a function's mathematical domain (empty logsumexp, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or precondition on a model/trainer/CLI setting.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unusable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : DataError(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Non-finite value produced during evaluation or optimization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace vampcf
