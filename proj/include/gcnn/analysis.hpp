#pragma once

#include <span>
#include <string>

#include "gcnn/model.hpp"

namespace gcnn {

/// Decomposition of a blended prediction f into a network part and coupling
/// terms: f = (1 - psi) f0 + gs = f0 + Gs.
struct CouplingReport {
  Mat grid;  // evaluation points, one per row
  Vec f0;    // network part Phi(grid) W of the constrained model
  Vec gs;    // psi .* f_C          (original coupling term)
  Vec Gs;    // psi .* (f_C - f0)   (alternative coupling term)
  Vec fm;    // f - f_unconstrained (generic modification; filled by the caller)
};

/// Requires a blended scheme; other schemes have no explicit coupling form.
CouplingReport coupling_decompose(const GcnnModel& model, const Eigen::Ref<const Mat>& grid);

/// Generic modification term f_m = f_constrained - f_unconstrained on the
/// grid. Both models must share centers, widths, and neuron count.
Vec generic_modification(const GcnnModel& constrained, const RbfModel& unconstrained,
                         const Eigen::Ref<const Mat>& grid);

struct WeightChangeReport {
  Vec delta_w;      // W_constrained - W_unconstrained; entry 0 is the bias change
  Vec normalized;   // delta_w / max|delta_w|; all zeros when zero_change is set
  Mat center_coords;
  bool zero_change = false;
};

WeightChangeReport weight_changes(const GcnnModel& constrained, const RbfModel& unconstrained);

/// Fraction of the |fm| mass carried by grid points within radius_in_gammas
/// times gamma of some constraint set. Auxiliary locality metric; no
/// pass/fail threshold attached.
double locality_ratio(const Eigen::Ref<const Mat>& grid, const Eigen::Ref<const Vec>& fm,
                      std::span<const ConstraintSpec> specs, double radius_in_gammas = 10.0);

/// CSV with columns x...,f0,gs,Gs,fm (fm column written as nan when unset).
std::string coupling_csv(const CouplingReport& report);

/// CSV with columns center_index,is_bias,center_coord...,delta_w,normalized.
std::string weight_changes_csv(const WeightChangeReport& report);

}  // namespace gcnn
