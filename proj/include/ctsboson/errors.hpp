#pragma once

#include <stdexcept>
#include <string>

namespace ctsboson {

/// Thrown when a caller passes arguments outside an operation's domain.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown for configurations that are well-formed but cannot be run
/// (e.g. a Hilbert space larger than the dense solver accepts).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctsboson
