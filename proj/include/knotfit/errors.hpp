#pragma once

#include <stdexcept>
#include <string>

namespace knotfit {

// Inconsistent user-facing configuration or input (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric procedure cannot proceed (CLI exit code 2).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure, reported with the offending path (CLI exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace knotfit
