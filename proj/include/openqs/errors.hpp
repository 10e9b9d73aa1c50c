#pragma once

#include <stdexcept>
#include <string>

namespace openqs {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent user input (bad dimensions, schema violations).
class InputError : public Error {
 public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

/// A numerical invariant failed at runtime (state validation, cross-checks).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A requested target or threshold could not be reached.
class UnreachableError : public Error {
 public:
  explicit UnreachableError(const std::string& msg) : Error(msg) {}
};

}  // namespace openqs
