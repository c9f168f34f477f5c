#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "gcnn/constraints.hpp"

namespace gcnn {

/// Normalized Cauchy bump used to impose constraints locally:
///   psi(delta; gamma) = 1 / (1 + (delta/gamma)^2).
/// psi(0) = 1, psi(gamma) = 1/2, strictly decreasing, positive everywhere.
inline double psi(double delta, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("psi: gamma must be positive");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("psi: delta must be finite and nonnegative");
  const double r = delta / gamma;
  return 1.0 / (1.0 + r * r);
}

/// d psi / d delta; zero at delta = 0.
inline double psi_derivative(double delta, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("psi_derivative: gamma must be positive");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("psi_derivative: delta must be finite and nonnegative");
  const double r = delta / gamma;
  const double den = 1.0 + r * r;
  return -2.0 * r / (gamma * den * den);
}

struct ActivePsi {
  double weight = 0.0;        // max_i psi(distance_i(x); gamma_i), in (0, 1]
  std::size_t active_index = 0;  // argmax; lowest index on ties
};

/// Blending weight over several constraints: the largest psi wins and its
/// constraint becomes the active one. Membership in any set gives weight 1.
ActivePsi aggregate_psi(std::span<const ConstraintSpec> specs, const Eigen::Ref<const Vec>& x);

}  // namespace gcnn
