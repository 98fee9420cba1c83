#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collapse {

/// Malformed or out-of-range caller input. CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition was violated (caller bug, e.g. collapsing a non-free face).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Complex-file parse failure; carries the offending 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An engine invariant failed during a run. Always a bug, never bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace collapse
