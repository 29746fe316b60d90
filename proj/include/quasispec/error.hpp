#pragma once

#include <stdexcept>
#include <string>

namespace quasispec {

/// Malformed input: bad files, invalid parameters, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite values, overflow, or a solver that failed to converge.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quasispec
