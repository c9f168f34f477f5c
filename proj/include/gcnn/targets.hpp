#pragma once

#include <cmath>
#include <string>

#include "gcnn/constraints.hpp"

namespace gcnn {

inline double cube(double t) { return t * t * t; }

/// sin(x)/x with the removable singularity filled in: sinc(0) = 1.
inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

namespace targets {

/// Built-in named targets usable from config files and model files:
///   "sinc"               value      sin(x0)/x0
///   "cube-x2"            value      x1^3
///   "cube-x2-slope"      derivative d/dx1 target 3*x1^2
///   "cube-x2-integrated" the slope above plus its antiderivative x1^3
ConstraintTarget by_name(const std::string& name);

bool is_registered(const std::string& name);

}  // namespace targets
}  // namespace gcnn
