#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gcnn/lif.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/targets.hpp"

using namespace gcnn;

TEST_CASE("psi shape identities") {
  for (double gamma : {1e-4, 0.5, 1.0, 3.0}) {
    CHECK(psi(0.0, gamma) == 1.0);
    CHECK(psi(gamma, gamma) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(psi(3.0 * gamma, gamma) == doctest::Approx(0.1).epsilon(1e-15));
  }
}

TEST_CASE("psi is strictly decreasing and positive") {
  SplitMix64 rng(5);
  const double gamma = 0.7;
  for (int k = 0; k < 10000; ++k) {
    const double d1 = rng.uniform(0.0, 50.0);
    const double d2 = d1 + rng.uniform(1e-9, 10.0);
    CHECK(psi(d1, gamma) > psi(d2, gamma));
    CHECK(psi(d2, gamma) > 0.0);
  }
}

TEST_CASE("psi locality: support collapses at large distance") {
  const double gamma = 0.25;
  CHECK(psi(1e3 * gamma, gamma) == doctest::Approx(1.0 / (1.0 + 1e6)).epsilon(1e-12));
  CHECK(psi(1e3 * gamma, gamma) < 1e-5 * psi(0.0, gamma));
}

TEST_CASE("psi_derivative matches central finite differences") {
  SplitMix64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const double gamma = rng.uniform(0.05, 2.0);
    const double delta = rng.uniform(0.001, 6.0);
    const double h = 1e-6;
    const double fd = (psi(delta + h, gamma) - psi(delta - h, gamma)) / (2.0 * h);
    CHECK(psi_derivative(delta, gamma) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(psi_derivative(0.0, 1.0) == 0.0);
}

TEST_CASE("psi rejects bad arguments") {
  CHECK_THROWS_AS(psi(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(psi(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(psi_derivative(1.0, -1.0), std::invalid_argument);
}

namespace {

std::vector<ConstraintSpec> two_point_specs(double gamma) {
  std::vector<ConstraintSpec> specs;
  for (const double at : {0.0, std::numbers::pi / 2.0}) {
    ConstraintSpec spec;
    spec.set = PointList{Mat::Constant(1, 1, at)};
    spec.target = targets::by_name("sinc");
    spec.gamma = gamma;
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace

TEST_CASE("aggregate_psi reduces to psi for one constraint") {
  std::vector<ConstraintSpec> specs(1, two_point_specs(0.3)[0]);
  SplitMix64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Vec x = Vec::Constant(1, rng.uniform(-5.0, 5.0));
    const ActivePsi a = aggregate_psi(specs, x);
    CHECK(a.weight == psi(distance(specs[0].set, x), specs[0].gamma));
    CHECK(a.active_index == 0);
  }
}

TEST_CASE("aggregate_psi membership dominance and enumeration") {
  const auto specs = two_point_specs(1e-4);
  const ActivePsi at_zero = aggregate_psi(specs, Vec::Zero(1));
  CHECK(at_zero.weight == 1.0);
  CHECK(at_zero.active_index == 0);

  const Vec x = Vec::Constant(1, 1.0);
  const ActivePsi far = aggregate_psi(specs, x);
  const double w0 = psi(1.0, 1e-4);
  const double w1 = psi(std::numbers::pi / 2.0 - 1.0, 1e-4);
  CHECK(far.weight == std::max(w0, w1));
  CHECK(far.active_index == (w0 >= w1 ? 0 : 1));
}

TEST_CASE("aggregate_psi rejects an empty constraint list") {
  CHECK_THROWS_AS(aggregate_psi({}, Vec::Zero(1)), std::invalid_argument);
}
