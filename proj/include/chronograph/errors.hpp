#pragma once

#include <stdexcept>
#include <string>

namespace chronograph {

// Bad input: malformed files, schema violations, out-of-range arguments.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values, failed gradient checks and the like.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chronograph
