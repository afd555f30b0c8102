#pragma once

#include <stdexcept>
#include <string>

namespace mrsvpr {

/// Caller passed data that violates a function precondition (bad sizes,
/// non-finite values, out-of-range indices).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A configuration value is malformed, unknown, or out of its allowed range.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested schedule or search cannot be satisfied by the given data
/// (e.g. pyramid too deep for the test sequence, no feasible trajectory).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / decode / parse failures when ingesting or writing data.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A particle population collapsed (all weights zero); callers usually
/// recover by resetting to uniform weights.
class DegenerateError : public std::runtime_error {
 public:
  explicit DegenerateError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace mrsvpr
