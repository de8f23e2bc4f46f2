#pragma once

#include <stdexcept>
#include <string>

namespace plate {

/// Bad or missing configuration value. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The transport speeds violate 1/sqrt(eps) < 1/sqrt(mu1) < 1/sqrt(mu2).
class UnsupportedRegime : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Arrays that should share a grid do not.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-point iteration failed to converge, or a time integration blew up.
/// Maps to CLI exit code 2.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plate
