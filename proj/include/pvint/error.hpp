#pragma once

#include <stdexcept>
#include <string>

namespace pvint {

/// Bad or inconsistent user input (file contents, configuration, dimensions).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge or hit a degenerate case.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (e.g. the validator rejected solver output).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pvint
