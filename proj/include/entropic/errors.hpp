#pragma once

#include <stdexcept>
#include <string>

namespace entropic {

// Input violates a documented precondition (bad mass, wrong shape, bad flag).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Filesystem or parse failure on external input.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejection sampling could not produce an accepted draw within its budget.
class StarvationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entropic
