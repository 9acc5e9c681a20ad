#pragma once

#include <stdexcept>
#include <string>

namespace levydev {

// Raised when a formula is evaluated outside the range where it is defined,
// e.g. a normalization with h1*m <= e. The CLI maps it to exit code 3.
class NumericGuardError : public std::runtime_error {
 public:
  explicit NumericGuardError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent experiment configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace levydev
