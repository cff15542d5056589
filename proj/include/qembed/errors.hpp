#pragma once

#include <stdexcept>
#include <string>

namespace qembed {

/// Thrown when a configuration, chromosome or coefficient vector does not
/// have the length required by the model it is evaluated against.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a request exceeds a hard resource cap (e.g. exhaustive
/// enumeration or dense-matrix register sizes).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a numerical routine fails to meet its accuracy contract
/// (integrator step underflow, eigensolver failure, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qembed
