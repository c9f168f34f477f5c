#include "gcnn/rbf.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gcnn/rng.hpp"

namespace gcnn {

namespace {

void check_model_inputs(const RbfModel& model, const Eigen::Ref<const Mat>& X) {
  if (model.num_centers() < 1) throw std::invalid_argument("rbf model has no centers");
  if (model.widths.size() != model.num_centers())
    throw std::invalid_argument("rbf model width count mismatch");
  if ((model.widths.array() <= 0.0).any())
    throw std::invalid_argument("rbf model widths must be positive");
  if (X.cols() != model.dim())
    throw std::invalid_argument("input dimension does not match rbf model");
}

Mat kmeans_centers(const Eigen::Ref<const Mat>& X, Index m, std::uint64_t seed) {
  const Index n = X.rows();
  SplitMix64 rng(seed);

  // k-means++ seeding
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(m));
  std::vector<bool> picked(static_cast<std::size_t>(n), false);
  Vec d2 = Vec::Constant(n, std::numeric_limits<double>::infinity());
  {
    Index first = static_cast<Index>(rng.uniform01() * static_cast<double>(n));
    if (first >= n) first = n - 1;
    chosen.push_back(first);
    picked[static_cast<std::size_t>(first)] = true;
  }
  for (Index i = 0; i < n; ++i)
    d2(i) = (X.row(i) - X.row(chosen[0])).squaredNorm();
  while (static_cast<Index>(chosen.size()) < m) {
    const double total = d2.sum();
    Index next = -1;
    if (total > 0.0) {
      double r = rng.uniform01() * total;
      for (Index i = 0; i < n; ++i) {
        r -= d2(i);
        if (r <= 0.0) {
          next = i;
          break;
        }
      }
      if (next < 0) next = n - 1;
    } else {
      for (Index i = 0; i < n; ++i) {  // all mass consumed: take the first unchosen point
        if (!picked[static_cast<std::size_t>(i)]) {
          next = i;
          break;
        }
      }
      if (next < 0) next = 0;
    }
    chosen.push_back(next);
    picked[static_cast<std::size_t>(next)] = true;
    for (Index i = 0; i < n; ++i)
      d2(i) = std::min(d2(i), (X.row(i) - X.row(next)).squaredNorm());
  }

  Mat centers(m, X.cols());
  for (Index j = 0; j < m; ++j) centers.row(j) = X.row(chosen[static_cast<std::size_t>(j)]);

  // Lloyd sweeps; empty clusters keep their previous center
  std::vector<Index> assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d2 = (X.row(i) - centers.row(0)).squaredNorm();
      for (Index j = 1; j < m; ++j) {
        const double d = (X.row(i) - centers.row(j)).squaredNorm();
        if (d < best_d2) {
          best = j;
          best_d2 = d;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    Mat sums = Mat::Zero(m, X.cols());
    std::vector<Index> counts(static_cast<std::size_t>(m), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (Index j = 0; j < m; ++j)
      if (counts[static_cast<std::size_t>(j)] > 0)
        centers.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
  }
  return centers;
}

Vec linspace(double lo, double hi, Index n) {
  Vec v(n);
  if (n == 1) {
    v(0) = lo;
    return v;
  }
  for (Index i = 0; i < n; ++i)
    v(i) = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
  return v;
}

Mat uniform_grid_centers(const Eigen::Ref<const Mat>& X, Index m) {
  const Index d = X.cols();
  if (d == 1) {
    Mat centers(m, 1);
    centers.col(0) = linspace(X.col(0).minCoeff(), X.col(0).maxCoeff(), m);
    return centers;
  }
  const Index per_axis = static_cast<Index>(std::llround(std::pow(static_cast<double>(m), 1.0 / static_cast<double>(d))));
  Index total = 1;
  for (Index k = 0; k < d; ++k) total *= per_axis;
  if (total != m)
    throw std::invalid_argument("uniform-grid centers need m to be a perfect d-th power");
  std::vector<Vec> axes;
  for (Index k = 0; k < d; ++k)
    axes.push_back(linspace(X.col(k).minCoeff(), X.col(k).maxCoeff(), per_axis));
  Mat centers(m, d);
  for (Index idx = 0; idx < m; ++idx) {
    Index rem = idx;
    for (Index k = d - 1; k >= 0; --k) {
      centers(idx, k) = axes[static_cast<std::size_t>(k)](rem % per_axis);
      rem /= per_axis;
    }
  }
  return centers;
}

Mat subset_centers(const Eigen::Ref<const Mat>& X, Index m, std::uint64_t seed) {
  const Index n = X.rows();
  SplitMix64 rng(seed);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index(0));
  for (Index i = 0; i < m; ++i) {  // partial Fisher-Yates
    const Index j = i + static_cast<Index>(rng.next() % static_cast<std::uint64_t>(n - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  Mat centers(m, X.cols());
  for (Index i = 0; i < m; ++i) centers.row(i) = X.row(idx[static_cast<std::size_t>(i)]);
  return centers;
}

Vec widths_for(const Mat& centers, const CenterPolicy& policy) {
  const Index m = centers.rows();
  if (policy.width_rule == CenterPolicy::WidthRule::Constant) {
    if (!(policy.constant_sigma > 0.0))
      throw std::invalid_argument("constant width must be positive");
    return Vec::Constant(m, policy.constant_sigma);
  }
  if (!(policy.nn_factor > 0.0))
    throw std::invalid_argument("nearest-neighbor width factor must be positive");
  if (m < 2)
    throw std::invalid_argument("nearest-neighbor widths need at least two centers");
  Vec widths(m);
  for (Index j = 0; j < m; ++j) {
    double nn = std::numeric_limits<double>::infinity();
    for (Index l = 0; l < m; ++l) {
      if (l == j) continue;
      nn = std::min(nn, (centers.row(j) - centers.row(l)).norm());
    }
    if (!(nn > 0.0))
      throw std::invalid_argument("duplicate centers break the nearest-neighbor width rule");
    widths(j) = policy.nn_factor * nn;
  }
  return widths;
}

}  // namespace

Mat feature_map(const RbfModel& model, const Eigen::Ref<const Mat>& X) {
  check_model_inputs(model, X);
  const Index n = X.rows();
  const Index m = model.num_centers();
  Mat phi(n, m + 1);
  phi.col(0).setOnes();
  for (Index j = 0; j < m; ++j) {
    const double inv_s2 = 1.0 / (model.widths(j) * model.widths(j));
    phi.col(j + 1) =
        (-(X.rowwise() - model.centers.row(j)).rowwise().squaredNorm() * inv_s2).array().exp();
  }
  return phi;
}

Mat feature_map_derivative(const RbfModel& model, const Eigen::Ref<const Mat>& X, Index axis) {
  check_model_inputs(model, X);
  if (axis < 0 || axis >= model.dim())
    throw std::invalid_argument("feature_map_derivative: axis out of range");
  const Index n = X.rows();
  const Index m = model.num_centers();
  Mat dphi(n, m + 1);
  dphi.col(0).setZero();
  for (Index j = 0; j < m; ++j) {
    const double inv_s2 = 1.0 / (model.widths(j) * model.widths(j));
    const auto gap = (X.col(axis).array() - model.centers(j, axis));
    dphi.col(j + 1) =
        (-(X.rowwise() - model.centers.row(j)).rowwise().squaredNorm() * inv_s2).array().exp() *
        (-2.0 * inv_s2) * gap;
  }
  return dphi;
}

RbfModel init_centers(const Eigen::Ref<const Mat>& X, Index m, const CenterPolicy& policy,
                      std::uint64_t seed) {
  if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("init_centers: empty data");
  if (!X.allFinite()) throw std::invalid_argument("init_centers: non-finite data");
  if (m < 1) throw std::invalid_argument("init_centers: need at least one center");
  if (m > X.rows() && policy.kind != CenterPolicy::Kind::UniformGrid)
    throw std::invalid_argument("init_centers: more centers than data points");

  RbfModel model;
  switch (policy.kind) {
    case CenterPolicy::Kind::UniformGrid:
      model.centers = uniform_grid_centers(X, m);
      break;
    case CenterPolicy::Kind::KMeans:
      model.centers = kmeans_centers(X, m, seed);
      break;
    case CenterPolicy::Kind::SampleSubset:
      model.centers = subset_centers(X, m, seed);
      break;
  }
  model.widths = widths_for(model.centers, policy);
  model.weights = Vec::Zero(m + 1);
  return model;
}

RbfModel fit_unconstrained(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                           RbfModel model, SvdTolerance tol) {
  if (y.size() != X.rows()) throw std::invalid_argument("fit_unconstrained: target size mismatch");
  const Mat phi = feature_map(model, X);
  model.weights = pseudo_inverse(phi.transpose() * phi, tol) * (phi.transpose() * y);
  return model;
}

Vec predict(const RbfModel& model, const Eigen::Ref<const Mat>& X) {
  if (!model.fitted()) throw std::logic_error("predict: model has no weights");
  return feature_map(model, X) * model.weights;
}

}  // namespace gcnn
