#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>

#include "gcnn/types.hpp"

namespace gcnn {

/// Constraint region: an explicit list of points, one per row.
struct PointList {
  Mat points;
};

/// Constraint region: the hyperplane { x : x[axis] == level }.
struct AxisPlane {
  Index axis = 0;
  double level = 0.0;
};

/// Constraint region described only by a distance oracle; supports distance
/// queries but not projection.
struct PredicateRegion {
  std::function<double(const Eigen::Ref<const Vec>&)> distance;
};

using ConstraintSet = std::variant<PointList, AxisPlane, PredicateRegion>;

/// f(x) = value(x) on the set.
struct ValueTarget {
  std::function<double(const Eigen::Ref<const Vec>&)> value;
  std::string name;  // registry name; empty for ad-hoc targets (not serializable)
};

/// df/dx_axis = slope(x) on the set.
struct DerivativeTarget {
  Index axis = 0;
  std::function<double(const Eigen::Ref<const Vec>&)> slope;
  std::string name;
};

/// Derivative target whose antiderivative along `axis` is known explicitly,
/// so it can be imposed like a value target.
struct IntegratedTarget {
  Index axis = 0;
  std::function<double(const Eigen::Ref<const Vec>&)> slope;
  std::function<double(const Eigen::Ref<const Vec>&)> antiderivative;
  std::string name;
};

using ConstraintTarget = std::variant<ValueTarget, DerivativeTarget, IntegratedTarget>;

struct ConstraintSpec {
  ConstraintSet set;
  ConstraintTarget target;
  double gamma = 1.0;  // locality parameter of the blending weight
};

/// Euclidean distance from x to the nearest element of the set; exactly zero
/// iff x belongs to the set (point-list and axis-plane kinds).
double distance(const ConstraintSet& set, const Eigen::Ref<const Vec>& x);

/// Nearest point of the set; point-list ties break toward the lowest index.
/// Throws unsupported_operation for predicate regions.
Vec project(const ConstraintSet& set, const Eigen::Ref<const Vec>& x);

/// d distance / d x[axis]. Returns 0 at distance zero, where the one-sided
/// derivatives disagree; callers multiply by a factor that vanishes there.
double distance_derivative(const ConstraintSet& set, const Eigen::Ref<const Vec>& x, Index axis);

bool has_value_form(const ConstraintTarget& target);
bool has_derivative_form(const ConstraintTarget& target);

/// Value of a value-form target (plain value, or the antiderivative of an
/// integrated target) at a point of the set. Throws for derivative-only targets.
double target_value(const ConstraintTarget& target, const Eigen::Ref<const Vec>& x_on_set);

/// Slope of a derivative-form target at a point of the set; throws for plain
/// value targets.
double target_slope(const ConstraintTarget& target, const Eigen::Ref<const Vec>& x_on_set);

/// Derivative axis of a derivative-form target.
Index target_axis(const ConstraintTarget& target);

/// Derivative along `axis` of the composed map x -> target_value(project(set, x)).
/// Analytic where the structure allows it (projection onto a point list is
/// locally constant; an axis-plane kills its own coordinate; an integrated
/// target differentiated along its own axis is the stored slope), central
/// finite differences otherwise.
double projected_value_derivative(const ConstraintSpec& spec, const Eigen::Ref<const Vec>& x,
                                  Index axis);

/// Validates a spec list against the ambient dimension and rejects
/// contradictory lists: two same-kind targets that disagree at a shared point
/// of their sets. The check probes point-list points, coincident axis-planes,
/// and pairwise axis-plane intersections; predicate regions are not probed.
void validate_specs(std::span<const ConstraintSpec> specs, Index dim);

}  // namespace gcnn
