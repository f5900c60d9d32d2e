#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace soc {

// Bad input: malformed files, invalid ids, inconsistent parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Numerical failure: divergent series, singular systems, damping factor out of range.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An oracle was asked to work on an instance larger than its budget.
class BudgetExceeded : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace soc
