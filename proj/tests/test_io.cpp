#include <doctest.h>

#include <sstream>

#include "gcnn/errors.hpp"
#include "gcnn/io.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/targets.hpp"

using namespace gcnn;

namespace {

GcnnModel fitted_toy(std::uint64_t seed) {
  SplitMix64 rng(seed);
  Mat X(12, 2);
  Vec y(12);
  for (Index i = 0; i < 12; ++i) {
    X(i, 0) = rng.uniform01();
    X(i, 1) = rng.uniform01();
    y(i) = std::exp(-X(i, 0)) * (X(i, 0) + cube(X(i, 1)));
  }
  RbfModel base;
  base.centers.resize(3, 2);
  for (Index j = 0; j < 3; ++j)
    for (Index k = 0; k < 2; ++k) base.centers(j, k) = rng.uniform01();
  base.widths = Vec::Constant(3, 0.7);
  base.weights = Vec::Zero(4);

  ConstraintSpec spec;
  spec.set = AxisPlane{0, 0.0};
  spec.target = targets::by_name("cube-x2");
  spec.gamma = 0.5;
  return fit_lis_value(X, y, base, {spec});
}

}  // namespace

TEST_CASE("rbf model text round trip is exact") {
  SplitMix64 rng(3);
  RbfModel model;
  model.centers.resize(4, 2);
  for (Index j = 0; j < 4; ++j)
    for (Index k = 0; k < 2; ++k) model.centers(j, k) = rng.uniform(-5.0, 5.0);
  model.widths.resize(4);
  for (Index j = 0; j < 4; ++j) model.widths(j) = rng.uniform(0.1, 2.0);
  model.weights.resize(5);
  for (Index j = 0; j < 5; ++j) model.weights(j) = rng.uniform(-1.0, 1.0);

  std::istringstream in(serialize(model));
  const RbfModel back = parse_rbf_model(in);
  CHECK((back.centers.array() == model.centers.array()).all());
  CHECK((back.widths.array() == model.widths.array()).all());
  CHECK((back.weights.array() == model.weights.array()).all());
}

TEST_CASE("constrained model round trip preserves predictions bitwise") {
  const GcnnModel model = fitted_toy(17);
  std::istringstream in(serialize(model));
  const GcnnModel back = parse_gcnn_model(in);
  CHECK(back.scheme == model.scheme);
  CHECK(back.specs.size() == model.specs.size());

  SplitMix64 rng(5);
  Mat X(20, 2);
  for (Index i = 0; i < 20; ++i) {
    X(i, 0) = rng.uniform01();
    X(i, 1) = rng.uniform01();
  }
  const Vec a = predict_constrained(model, X);
  const Vec b = predict_constrained(back, X);
  CHECK((a.array() == b.array()).all());
}

TEST_CASE("plain rbf files load as unconstrained models") {
  SplitMix64 rng(23);
  RbfModel model;
  model.centers = Mat::Constant(1, 1, 0.5);
  model.widths = Vec::Ones(1);
  model.weights.resize(2);
  model.weights << 0.25, -1.5;
  std::istringstream in(serialize(model));
  const GcnnModel back = parse_gcnn_model(in);
  CHECK(back.scheme == Scheme::Unconstrained);
  CHECK(back.specs.empty());
  CHECK((back.base.weights.array() == model.weights.array()).all());
}

TEST_CASE("serialize rejects ad-hoc targets and parse rejects malformed files") {
  SplitMix64 rng(29);
  Mat X(6, 1);
  Vec y(6);
  for (Index i = 0; i < 6; ++i) {
    X(i, 0) = rng.uniform(-1.0, 1.0);
    y(i) = X(i, 0);
  }
  RbfModel base;
  base.centers = Mat::Zero(1, 1);
  base.widths = Vec::Ones(1);
  base.weights = Vec::Zero(2);
  ConstraintSpec spec;
  spec.set = PointList{Mat::Zero(1, 1)};
  spec.target = ValueTarget{[](const Eigen::Ref<const Vec>&) { return 0.0; }, ""};
  spec.gamma = 1.0;
  const GcnnModel adhoc = fit_lis_value(X, y, base, {spec});
  CHECK_THROWS_AS(serialize(adhoc), std::invalid_argument);

  std::istringstream empty("");
  CHECK_THROWS_AS(parse_gcnn_model(empty), config_error);
  std::istringstream truncated("3 1\n0.0\n");
  CHECK_THROWS_AS(parse_gcnn_model(truncated), config_error);
  std::istringstream bad_width("1 1\n0.0\n-1.0\n0.0 0.0\n");
  CHECK_THROWS_AS(parse_gcnn_model(bad_width), config_error);
}
