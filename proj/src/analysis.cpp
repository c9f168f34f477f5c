#include "gcnn/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gcnn/errors.hpp"
#include "gcnn/lif.hpp"

namespace gcnn {

namespace {

void check_pair(const GcnnModel& constrained, const RbfModel& unconstrained) {
  if (!constrained.base.fitted() || !unconstrained.fitted())
    throw std::invalid_argument("paired models must both be fitted");
  const RbfModel& a = constrained.base;
  const bool same = a.centers.rows() == unconstrained.centers.rows() &&
                    a.centers.cols() == unconstrained.centers.cols() &&
                    (a.centers.array() == unconstrained.centers.array()).all() &&
                    (a.widths.array() == unconstrained.widths.array()).all();
  if (!same) throw std::invalid_argument("paired models must share centers and widths");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CouplingReport coupling_decompose(const GcnnModel& model, const Eigen::Ref<const Mat>& grid) {
  if (!model.base.fitted()) throw std::logic_error("coupling_decompose: model not fitted");
  if (model.scheme != Scheme::LisValue && model.scheme != Scheme::LisIntegrated)
    throw unsupported_operation(
        "coupling_decompose: only blended schemes expose an explicit coupling form");
  if (model.specs.empty())
    throw std::invalid_argument("coupling_decompose: model has no constraints");

  CouplingReport report;
  report.grid = grid;
  report.f0 = predict(model.base, grid);
  report.gs.resize(grid.rows());
  report.Gs.resize(grid.rows());
  for (Index i = 0; i < grid.rows(); ++i) {
    const Vec x = grid.row(i).transpose();
    const ActivePsi a = aggregate_psi(model.specs, x);
    const ConstraintSpec& spec = model.specs[a.active_index];
    const double fc = target_value(spec.target, project(spec.set, x));
    report.gs(i) = a.weight * fc;
    report.Gs(i) = a.weight * (fc - report.f0(i));
  }
  return report;
}

Vec generic_modification(const GcnnModel& constrained, const RbfModel& unconstrained,
                         const Eigen::Ref<const Mat>& grid) {
  check_pair(constrained, unconstrained);
  return predict_constrained(constrained, grid) - predict(unconstrained, grid);
}

WeightChangeReport weight_changes(const GcnnModel& constrained, const RbfModel& unconstrained) {
  check_pair(constrained, unconstrained);
  WeightChangeReport report;
  report.delta_w = constrained.base.weights - unconstrained.weights;
  report.center_coords = constrained.base.centers;
  const double max_abs = report.delta_w.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) {
    report.zero_change = true;
    report.normalized = Vec::Zero(report.delta_w.size());
  } else {
    report.normalized = report.delta_w / max_abs;
  }
  return report;
}

double locality_ratio(const Eigen::Ref<const Mat>& grid, const Eigen::Ref<const Vec>& fm,
                      std::span<const ConstraintSpec> specs, double radius_in_gammas) {
  if (fm.size() != grid.rows()) throw std::invalid_argument("locality_ratio: size mismatch");
  if (specs.empty()) throw std::invalid_argument("locality_ratio: no constraints");
  double total = 0.0, total_c = 0.0;
  double near = 0.0, near_c = 0.0;
  for (Index i = 0; i < grid.rows(); ++i) {
    const Vec x = grid.row(i).transpose();
    const double mass = std::abs(fm(i));
    double yv = mass - total_c;
    double tv = total + yv;
    total_c = (tv - total) - yv;
    total = tv;
    bool close = false;
    for (const auto& spec : specs)
      if (distance(spec.set, x) <= radius_in_gammas * spec.gamma) {
        close = true;
        break;
      }
    if (close) {
      yv = mass - near_c;
      tv = near + yv;
      near_c = (tv - near) - yv;
      near = tv;
    }
  }
  return total > 0.0 ? near / total : 0.0;
}

std::string coupling_csv(const CouplingReport& report) {
  std::string out;
  for (Index k = 0; k < report.grid.cols(); ++k) out += "x" + std::to_string(k) + ",";
  out += "f0,gs,Gs,fm\n";
  const bool has_fm = report.fm.size() == report.grid.rows();
  for (Index i = 0; i < report.grid.rows(); ++i) {
    for (Index k = 0; k < report.grid.cols(); ++k) out += fmt(report.grid(i, k)) + ",";
    out += fmt(report.f0(i)) + "," + fmt(report.gs(i)) + "," + fmt(report.Gs(i)) + ",";
    out += has_fm ? fmt(report.fm(i)) : "nan";
    out += "\n";
  }
  return out;
}

std::string weight_changes_csv(const WeightChangeReport& report) {
  const Index d = report.center_coords.cols();
  std::string out = "center_index,is_bias";
  for (Index k = 0; k < d; ++k) out += ",center_coord" + std::to_string(k);
  out += ",delta_w,normalized\n";
  for (Index i = 0; i < report.delta_w.size(); ++i) {
    out += std::to_string(i) + "," + (i == 0 ? "1" : "0");
    for (Index k = 0; k < d; ++k)
      out += "," + (i == 0 ? std::string("nan") : fmt(report.center_coords(i - 1, k)));
    out += "," + fmt(report.delta_w(i)) + "," + fmt(report.normalized(i)) + "\n";
  }
  return out;
}

}  // namespace gcnn
