#pragma once

#include <stdexcept>
#include <string>

namespace nrpt {

/// Invalid user-supplied configuration (bad counts, malformed schedule, unsupported kernel).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite potential, failed bracketing and similar numerical breakdowns.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nrpt
