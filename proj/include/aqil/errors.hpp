#pragma once

#include <stdexcept>
#include <string>

namespace aqil {

/// Invalid configuration or arguments. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite values or other numerical breakdown. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aqil
