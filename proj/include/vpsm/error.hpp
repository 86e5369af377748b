#pragma once

#include <stdexcept>
#include <string>

namespace vpsm {

/// Invalid or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure of the numerics at run time: CFL violation, crossing feet,
/// non-converged characteristics, singular solve (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vpsm
