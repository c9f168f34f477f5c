#pragma once

#include <stdexcept>

namespace gcnn {

/// Malformed experiment/CLI configuration (bad key, bad value, bad combination).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A solve could not produce a usable result.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Equality constraints that no weight vector can satisfy.
struct infeasible_error : numerical_error {
  using numerical_error::numerical_error;
};

/// Requested operation is not defined for the given variant (e.g. projection
/// onto a black-box region).
struct unsupported_operation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace gcnn
