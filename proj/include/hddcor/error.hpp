#pragma once

#include <stdexcept>
#include <string>

namespace hddcor {

// Bad input: shapes, domains, malformed files. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation that cannot produce a meaningful number for valid input.
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hddcor
