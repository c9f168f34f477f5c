#include "gcnn/constraints.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "gcnn/errors.hpp"

namespace gcnn {

namespace {

void check_finite(const Eigen::Ref<const Vec>& x) {
  if (!x.allFinite()) throw std::invalid_argument("constraint query: non-finite point");
}

Index nearest_point_index(const PointList& set, const Eigen::Ref<const Vec>& x) {
  if (set.points.rows() == 0) throw std::invalid_argument("point-list constraint set is empty");
  if (set.points.cols() != x.size())
    throw std::invalid_argument("constraint set dimension mismatch");
  Index best = 0;
  double best_d2 = (set.points.row(0).transpose() - x).squaredNorm();
  for (Index i = 1; i < set.points.rows(); ++i) {
    const double d2 = (set.points.row(i).transpose() - x).squaredNorm();
    if (d2 < best_d2) {  // strict: ties keep the lowest index
      best = i;
      best_d2 = d2;
    }
  }
  return best;
}

void check_axis(const AxisPlane& set, Index dim) {
  if (set.axis < 0 || set.axis >= dim)
    throw std::invalid_argument("axis-plane constraint axis out of range");
}

}  // namespace

double distance(const ConstraintSet& set, const Eigen::Ref<const Vec>& x) {
  check_finite(x);
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PointList>) {
          return (s.points.row(nearest_point_index(s, x)).transpose() - x).norm();
        } else if constexpr (std::is_same_v<S, AxisPlane>) {
          check_axis(s, x.size());
          return std::abs(x(s.axis) - s.level);
        } else {
          if (!s.distance) throw std::invalid_argument("predicate region without distance oracle");
          const double d = s.distance(x);
          if (!(d >= 0.0) || !std::isfinite(d))
            throw std::invalid_argument("predicate region distance oracle returned a bad value");
          return d;
        }
      },
      set);
}

Vec project(const ConstraintSet& set, const Eigen::Ref<const Vec>& x) {
  check_finite(x);
  return std::visit(
      [&](const auto& s) -> Vec {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PointList>) {
          return s.points.row(nearest_point_index(s, x)).transpose();
        } else if constexpr (std::is_same_v<S, AxisPlane>) {
          check_axis(s, x.size());
          Vec p = x;
          p(s.axis) = s.level;
          return p;
        } else {
          throw unsupported_operation("predicate regions do not support projection");
        }
      },
      set);
}

double distance_derivative(const ConstraintSet& set, const Eigen::Ref<const Vec>& x, Index axis) {
  check_finite(x);
  if (axis < 0 || axis >= x.size())
    throw std::invalid_argument("distance_derivative: axis out of range");
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PointList>) {
          const Index j = nearest_point_index(s, x);
          const double d = (s.points.row(j).transpose() - x).norm();
          if (d == 0.0) return 0.0;
          return (x(axis) - s.points(j, axis)) / d;
        } else if constexpr (std::is_same_v<S, AxisPlane>) {
          check_axis(s, x.size());
          if (axis != s.axis) return 0.0;
          const double gap = x(s.axis) - s.level;
          return gap == 0.0 ? 0.0 : (gap > 0.0 ? 1.0 : -1.0);
        } else {
          throw unsupported_operation("predicate regions do not support distance derivatives");
        }
      },
      set);
}

bool has_value_form(const ConstraintTarget& target) {
  return !std::holds_alternative<DerivativeTarget>(target);
}

bool has_derivative_form(const ConstraintTarget& target) {
  return !std::holds_alternative<ValueTarget>(target);
}

double target_value(const ConstraintTarget& target, const Eigen::Ref<const Vec>& x_on_set) {
  return std::visit(
      [&](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ValueTarget>) {
          return t.value(x_on_set);
        } else if constexpr (std::is_same_v<T, IntegratedTarget>) {
          return t.antiderivative(x_on_set);
        } else {
          throw std::invalid_argument("derivative target has no value form");
        }
      },
      target);
}

double target_slope(const ConstraintTarget& target, const Eigen::Ref<const Vec>& x_on_set) {
  return std::visit(
      [&](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ValueTarget>) {
          throw std::invalid_argument("value target has no slope");
        } else {
          return t.slope(x_on_set);
        }
      },
      target);
}

Index target_axis(const ConstraintTarget& target) {
  return std::visit(
      [](const auto& t) -> Index {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ValueTarget>) {
          throw std::invalid_argument("value target has no derivative axis");
        } else {
          return t.axis;
        }
      },
      target);
}

double projected_value_derivative(const ConstraintSpec& spec, const Eigen::Ref<const Vec>& x,
                                  Index axis) {
  check_finite(x);
  if (axis < 0 || axis >= x.size())
    throw std::invalid_argument("projected_value_derivative: axis out of range");
  if (std::holds_alternative<PointList>(spec.set)) return 0.0;  // locally constant projection
  if (std::holds_alternative<PredicateRegion>(spec.set))
    throw unsupported_operation("predicate regions do not support projection");

  const auto& plane = std::get<AxisPlane>(spec.set);
  check_axis(plane, x.size());
  if (axis == plane.axis) return 0.0;  // projection removes this coordinate

  if (const auto* integ = std::get_if<IntegratedTarget>(&spec.target); integ && integ->axis == axis)
    return integ->slope(project(spec.set, x));

  // no analytic form known; central differences of the composed map
  const double h = 1e-6;
  Vec lo = x, hi = x;
  lo(axis) -= h;
  hi(axis) += h;
  return (target_value(spec.target, project(spec.set, hi)) -
          target_value(spec.target, project(spec.set, lo))) /
         (2.0 * h);
}

namespace {

// Compares two specs at a probe point lying in both sets; same-kind targets
// must agree there.
void check_agreement(const ConstraintSpec& a, const ConstraintSpec& b,
                     const Eigen::Ref<const Vec>& probe) {
  constexpr double kTol = 1e-9;
  const bool values = has_value_form(a.target) && has_value_form(b.target);
  if (values) {
    const double va = target_value(a.target, probe);
    const double vb = target_value(b.target, probe);
    if (std::abs(va - vb) > kTol * std::max({1.0, std::abs(va), std::abs(vb)}))
      throw std::invalid_argument("contradictory constraints: value targets disagree where sets overlap");
  }
  if (has_derivative_form(a.target) && has_derivative_form(b.target) &&
      target_axis(a.target) == target_axis(b.target)) {
    const double sa = target_slope(a.target, probe);
    const double sb = target_slope(b.target, probe);
    if (std::abs(sa - sb) > kTol * std::max({1.0, std::abs(sa), std::abs(sb)}))
      throw std::invalid_argument("contradictory constraints: slope targets disagree where sets overlap");
  }
}

std::optional<Vec> shared_probe(const ConstraintSet& a, const ConstraintSet& b, Index dim) {
  // point-list points that lie in the other set
  if (const auto* pl = std::get_if<PointList>(&a)) {
    for (Index i = 0; i < pl->points.rows(); ++i) {
      Vec p = pl->points.row(i).transpose();
      if (!std::holds_alternative<PredicateRegion>(b) && distance(b, p) == 0.0) return p;
    }
    return std::nullopt;
  }
  if (std::holds_alternative<PointList>(b) || std::holds_alternative<PredicateRegion>(a) ||
      std::holds_alternative<PredicateRegion>(b))
    return std::nullopt;
  const auto& pa = std::get<AxisPlane>(a);
  const auto& pb = std::get<AxisPlane>(b);
  if (pa.axis == pb.axis) {
    if (pa.level != pb.level) return std::nullopt;
    Vec p = Vec::Zero(dim);
    p(pa.axis) = pa.level;
    return p;
  }
  Vec p = Vec::Zero(dim);  // distinct axes always intersect
  p(pa.axis) = pa.level;
  p(pb.axis) = pb.level;
  return p;
}

}  // namespace

void validate_specs(std::span<const ConstraintSpec> specs, Index dim) {
  if (dim < 1) throw std::invalid_argument("validate_specs: dimension must be >= 1");
  for (const auto& spec : specs) {
    if (!(spec.gamma > 0.0)) throw std::invalid_argument("constraint spec: gamma must be positive");
    if (const auto* pl = std::get_if<PointList>(&spec.set)) {
      if (pl->points.rows() == 0)
        throw std::invalid_argument("constraint spec: empty point list");
      if (pl->points.cols() != dim)
        throw std::invalid_argument("constraint spec: point dimension mismatch");
      if (!pl->points.allFinite())
        throw std::invalid_argument("constraint spec: non-finite constraint points");
    } else if (const auto* ap = std::get_if<AxisPlane>(&spec.set)) {
      check_axis(*ap, dim);
    }
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (std::size_t j = i + 1; j < specs.size(); ++j) {
      if (auto probe = shared_probe(specs[i].set, specs[j].set, dim)) {
        check_agreement(specs[i], specs[j], *probe);
      } else if (auto probe2 = shared_probe(specs[j].set, specs[i].set, dim)) {
        check_agreement(specs[i], specs[j], *probe2);
      }
    }
  }
}

}  // namespace gcnn
