#include "gcnn/targets.hpp"

#include "gcnn/errors.hpp"

namespace gcnn::targets {

namespace {

double coord_cube(const Eigen::Ref<const Vec>& x) { return cube(x(1)); }
double coord_cube_slope(const Eigen::Ref<const Vec>& x) { return 3.0 * x(1) * x(1); }

}  // namespace

ConstraintTarget by_name(const std::string& name) {
  if (name == "sinc")
    return ValueTarget{[](const Eigen::Ref<const Vec>& x) { return sinc(x(0)); }, name};
  if (name == "cube-x2") return ValueTarget{coord_cube, name};
  if (name == "cube-x2-slope") return DerivativeTarget{1, coord_cube_slope, name};
  if (name == "cube-x2-integrated") return IntegratedTarget{1, coord_cube_slope, coord_cube, name};
  throw config_error("unknown constraint target: " + name);
}

bool is_registered(const std::string& name) {
  return name == "sinc" || name == "cube-x2" || name == "cube-x2-slope" ||
         name == "cube-x2-integrated";
}

}  // namespace gcnn::targets
