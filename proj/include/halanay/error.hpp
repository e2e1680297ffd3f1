#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace halanay {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Expression evaluation failed (division by zero, non-finite result).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or invalid user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The certification horizon does not cover enough windows.
class HorizonError : public Error {
 public:
  using Error::Error;
};

/// Integration aborted because the state became non-finite.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_valid_time)
      : Error(what + " (last valid time " + std::to_string(last_valid_time) + ")"),
        last_valid_time_(last_valid_time) {}
  [[nodiscard]] double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace halanay
