#pragma once

#include <stdexcept>
#include <string>

namespace mtlab {

// Invalid parameters, malformed configs, mismatched dimensions. The CLI maps
// these to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Vector lengths or ambient dimensions that do not line up.
class DimensionError : public ConfigError {
  public:
    explicit DimensionError(const std::string& what) : ConfigError(what) {}
};

// Parameters outside the validity range of a closed-form bound.
class DomainError : public ConfigError {
  public:
    explicit DomainError(const std::string& what) : ConfigError(what) {}
};

// A runtime precondition (e.g. point separation) that was checked and failed.
class PreconditionError : public ConfigError {
  public:
    explicit PreconditionError(const std::string& what) : ConfigError(what) {}
};

}  // namespace mtlab
