#pragma once

#include <stdexcept>
#include <string>

namespace hippo {

// Bad run/env/architecture setup (dimension mismatches, invalid bounds).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Bad value passed to an otherwise well-configured operation.
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite intermediate or diverging computation.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse (e.g. stepping a finished episode).
struct UsageError : std::logic_error {
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace hippo
