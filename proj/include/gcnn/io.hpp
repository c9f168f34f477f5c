#pragma once

#include <iosfwd>
#include <string>

#include "gcnn/model.hpp"

namespace gcnn {

/// Flat text model format. Plain RBF models:
///   <m> <d>
///   m center rows of d coordinates
///   one row of m widths
///   one row of m+1 weights
/// Constrained models prepend "gcnn <scheme> <num-specs>" and append one
/// descriptor block per constraint (gamma, set, registered target name).
/// Numbers round-trip exactly (%.17g).
std::string serialize(const RbfModel& model);
std::string serialize(const GcnnModel& model);

RbfModel parse_rbf_model(std::istream& in);
GcnnModel parse_gcnn_model(std::istream& in);

void save_model(const std::string& path, const GcnnModel& model);

/// Accepts both formats; a plain RBF file loads as an unconstrained model.
GcnnModel load_model(const std::string& path);

}  // namespace gcnn
