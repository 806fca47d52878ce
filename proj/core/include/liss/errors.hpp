#pragma once

#include <stdexcept>
#include <string>

namespace liss {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration file / CLI argument problems (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state or norm above the blow-up threshold (exit code 3).
class BlowUpError : public Error {
 public:
  BlowUpError(double time, const std::string& what)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Numerical procedure failed to converge or produced unusable output
/// (exit code 3).
class NumericsError : public Error {
 public:
  using Error::Error;
};

}  // namespace liss
