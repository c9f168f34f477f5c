#include "gcnn/lif.hpp"

namespace gcnn {

ActivePsi aggregate_psi(std::span<const ConstraintSpec> specs, const Eigen::Ref<const Vec>& x) {
  if (specs.empty()) throw std::invalid_argument("aggregate_psi: empty constraint list");
  ActivePsi best{psi(distance(specs[0].set, x), specs[0].gamma), 0};
  for (std::size_t i = 1; i < specs.size(); ++i) {
    const double w = psi(distance(specs[i].set, x), specs[i].gamma);
    if (w > best.weight) {  // strict: ties keep the lowest index
      best.weight = w;
      best.active_index = i;
    }
  }
  return best;
}

}  // namespace gcnn
