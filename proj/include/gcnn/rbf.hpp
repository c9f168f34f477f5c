#pragma once

#include <cstdint>

#include "gcnn/numerics.hpp"
#include "gcnn/types.hpp"

namespace gcnn {

/// Gaussian RBF expansion with a leading bias column. Row i of the feature
/// map is [1, phi_1(x_i), ..., phi_m(x_i)] with
///   phi_j(x) = exp(-|x - mu_j|^2 / sigma_j^2),
/// so the weight vector has m+1 entries and weights(0) is the bias.
struct RbfModel {
  Mat centers;  // m x d
  Vec widths;   // m, strictly positive
  Vec weights;  // m + 1; zero until fitted

  Index num_centers() const { return centers.rows(); }
  Index dim() const { return centers.cols(); }
  bool fitted() const { return weights.size() == centers.rows() + 1 && centers.rows() >= 1; }
};

struct Dataset {
  Mat X;  // n x d
  Vec y;  // n
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct CenterPolicy {
  enum class Kind { UniformGrid, KMeans, SampleSubset };
  enum class WidthRule { Constant, NearestNeighborScaled };

  Kind kind = Kind::KMeans;
  WidthRule width_rule = WidthRule::Constant;
  double constant_sigma = 1.0;  // used by Constant
  double nn_factor = 1.0;       // used by NearestNeighborScaled
};

Mat feature_map(const RbfModel& model, const Eigen::Ref<const Mat>& X);

/// Entrywise d phi_j / d x_axis; the bias column is zero.
Mat feature_map_derivative(const RbfModel& model, const Eigen::Ref<const Mat>& X, Index axis);

/// Places centers and widths; weights come back zeroed. Deterministic for a
/// fixed seed. KMeans runs k-means++ seeding plus at most 100 Lloyd sweeps.
RbfModel init_centers(const Eigen::Ref<const Mat>& X, Index m, const CenterPolicy& policy,
                      std::uint64_t seed);

/// Least-squares weights through the Gram pseudo-inverse,
///   W = (Phi^T Phi)^+ Phi^T y.
RbfModel fit_unconstrained(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                           RbfModel model, SvdTolerance tol = {});

Vec predict(const RbfModel& model, const Eigen::Ref<const Mat>& X);

}  // namespace gcnn
