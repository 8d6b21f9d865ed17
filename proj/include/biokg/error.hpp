#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biokg {

// Base of every error the library raises. The CLI maps subclasses onto exit
// codes: IoError -> 2, everything else -> 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented contract (bad id, bad descriptor, bad workflow).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Mutation attempted on a frozen graph, or similar misuse of the API.
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized input. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace biokg
