#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cuspbasis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Point outside the domain of a function (e.g. Im z <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue or coefficient data does not cover what was asked for.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed newform JSON. `where` is a JSON path or "line:column".
class SchemaError : public Error {
 public:
  SchemaError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// A q-expansion is too short for a certified evaluation.
class TruncationError : public Error {
 public:
  TruncationError(std::int64_t required, std::int64_t available, double height)
      : Error("truncation insufficient: need " + std::to_string(required) +
              " terms, have " + std::to_string(available) + " (Im z = " +
              std::to_string(height) + ")"),
        required_(required),
        available_(available),
        height_(height) {}

  std::int64_t required() const noexcept { return required_; }
  std::int64_t available() const noexcept { return available_; }
  double height() const noexcept { return height_; }

 private:
  std::int64_t required_;
  std::int64_t available_;
  double height_;
};

}  // namespace cuspbasis
