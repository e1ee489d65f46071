#pragma once

#include <stdexcept>
#include <string>

namespace ptoric {

/// A precondition or validation failure in the caller's input.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its target (non-convergence, singular system, ...).
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptoric
