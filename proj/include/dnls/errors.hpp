#pragma once

#include <stdexcept>
#include <string>

namespace dnls {

/// Base of every error thrown by the library. `kind()` is the short
/// machine-parseable tag the CLI prints after `dnls:error:`.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Invalid configuration or precondition on user-supplied parameters.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

/// Operator evaluated outside its domain (e.g. M(t) at t = 0).
struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Malformed input data handed to an analysis routine.
struct InputError : Error {
  explicit InputError(const std::string& what) : Error("input", what) {}
};

/// Too much mass near the periodic boundary.
struct GuardViolation : Error {
  GuardViolation(const std::string& what, double t)
      : Error("guard", what), time(t) {}
  double time;
};

struct NonFiniteError : Error {
  NonFiniteError(const std::string& what, double t)
      : Error("nonfinite", what), time(t) {}
  double time;
};

/// Fixed-point iteration failed to contract.
struct DivergenceError : Error {
  explicit DivergenceError(const std::string& what) : Error("divergence", what) {}
};

/// Checkpoint file unreadable (bad magic, version, or truncated payload).
struct FormatError : Error {
  explicit FormatError(const std::string& what) : Error("format", what) {}
};

}  // namespace dnls
