#include "gcnn/model.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "gcnn/errors.hpp"
#include "gcnn/lif.hpp"

namespace gcnn {

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Unconstrained: return "unconstrained";
    case Scheme::LisValue: return "lis-value";
    case Scheme::LisDerivative: return "lis-derivative";
    case Scheme::LisIntegrated: return "lis-integrated";
    case Scheme::GisLagrange: return "gis-lagrange";
  }
  throw std::logic_error("unknown scheme");
}

Scheme scheme_from_name(std::string_view name) {
  if (name == "unconstrained") return Scheme::Unconstrained;
  if (name == "lis-value") return Scheme::LisValue;
  if (name == "lis-derivative") return Scheme::LisDerivative;
  if (name == "lis-integrated") return Scheme::LisIntegrated;
  if (name == "gis-lagrange") return Scheme::GisLagrange;
  throw std::invalid_argument("unknown scheme name: " + std::string(name));
}

namespace {

bool blended(const GcnnModel& model) {
  return (model.scheme == Scheme::LisValue || model.scheme == Scheme::LisIntegrated) &&
         !model.specs.empty();
}

void check_fit_inputs(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                      const RbfModel& base) {
  if (base.num_centers() < 1 || base.widths.size() != base.num_centers())
    throw std::invalid_argument("fit: base model has no centers/widths");
  if (X.cols() != base.dim()) throw std::invalid_argument("fit: input dimension mismatch");
  if (y.size() != X.rows()) throw std::invalid_argument("fit: target size mismatch");
}

}  // namespace

Vec predict_constrained(const GcnnModel& model, const Eigen::Ref<const Mat>& X) {
  if (!model.base.fitted()) throw std::logic_error("predict_constrained: model not fitted");
  Vec out = predict(model.base, X);
  if (!blended(model)) return out;
  for (Index i = 0; i < X.rows(); ++i) {
    const Vec x = X.row(i).transpose();
    const ActivePsi a = aggregate_psi(model.specs, x);
    const ConstraintSpec& spec = model.specs[a.active_index];
    const double fc = target_value(spec.target, project(spec.set, x));
    out(i) = (1.0 - a.weight) * out(i) + a.weight * fc;
  }
  return out;
}

Vec predict_constrained_derivative(const GcnnModel& model, const Eigen::Ref<const Mat>& X,
                                   Index axis) {
  if (!model.base.fitted()) throw std::logic_error("predict_constrained_derivative: model not fitted");
  Vec dnet = feature_map_derivative(model.base, X, axis) * model.base.weights;
  if (!blended(model)) return dnet;
  const Vec net = predict(model.base, X);
  for (Index i = 0; i < X.rows(); ++i) {
    const Vec x = X.row(i).transpose();
    const ActivePsi a = aggregate_psi(model.specs, x);
    const ConstraintSpec& spec = model.specs[a.active_index];
    const double delta = distance(spec.set, x);
    const double dpsi =
        delta == 0.0 ? 0.0 : psi_derivative(delta, spec.gamma) * distance_derivative(spec.set, x, axis);
    const double fc = target_value(spec.target, project(spec.set, x));
    const double dfc = projected_value_derivative(spec, x, axis);
    dnet(i) = (1.0 - a.weight) * dnet(i) + dpsi * (fc - net(i)) + a.weight * dfc;
  }
  return dnet;
}

GcnnModel fit_lis_value(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                        RbfModel base, std::vector<ConstraintSpec> specs, SvdTolerance tol) {
  check_fit_inputs(X, y, base);
  validate_specs(specs, X.cols());
  for (const auto& spec : specs)
    if (!std::holds_alternative<ValueTarget>(spec.target))
      throw std::invalid_argument("fit_lis_value: all targets must be value targets");

  const Index n = X.rows();
  Mat design = feature_map(base, X);
  Vec rhs = y;
  if (!specs.empty()) {
    // residual of the blend: (y - psi .* f_C) - diag(1 - psi) Phi W
    for (Index i = 0; i < n; ++i) {
      const Vec x = X.row(i).transpose();
      const ActivePsi a = aggregate_psi(specs, x);
      const ConstraintSpec& spec = specs[a.active_index];
      rhs(i) = y(i) - a.weight * target_value(spec.target, project(spec.set, x));
      design.row(i) *= 1.0 - a.weight;
    }
  }
  base.weights = weighted_least_squares(design, rhs, Vec::Ones(n), tol);
  return GcnnModel{std::move(base), std::move(specs), Scheme::LisValue};
}

GcnnModel fit_lis_derivative(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                             RbfModel base, std::vector<ConstraintSpec> specs, SvdTolerance tol) {
  check_fit_inputs(X, y, base);
  validate_specs(specs, X.cols());
  for (const auto& spec : specs)
    if (!has_derivative_form(spec.target))
      throw std::invalid_argument("fit_lis_derivative: all targets must be derivative targets");

  const Index n = X.rows();
  const Mat phi = feature_map(base, X);
  if (specs.empty()) {
    base.weights = weighted_least_squares(phi, y, Vec::Ones(n), tol);
    return GcnnModel{std::move(base), std::move(specs), Scheme::LisDerivative};
  }

  // stacked system: data rows weighted by 1 - psi, derivative rows by psi
  Mat design(2 * n, phi.cols());
  Vec rhs(2 * n);
  Vec row_weights(2 * n);
  design.topRows(n) = phi;
  rhs.head(n) = y;
  for (Index i = 0; i < n; ++i) {
    const Vec x = X.row(i).transpose();
    const ActivePsi a = aggregate_psi(specs, x);
    const ConstraintSpec& spec = specs[a.active_index];
    const Index k = target_axis(spec.target);
    design.row(n + i) = feature_map_derivative(base, x.transpose(), k).row(0);
    rhs(n + i) = target_slope(spec.target, project(spec.set, x));
    row_weights(i) = 1.0 - a.weight;
    row_weights(n + i) = a.weight;
  }
  base.weights = weighted_least_squares(design, rhs, row_weights, tol);
  return GcnnModel{std::move(base), std::move(specs), Scheme::LisDerivative};
}

GcnnModel fit_lis_integrated(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                             RbfModel base, std::vector<ConstraintSpec> specs, SvdTolerance tol) {
  std::vector<ConstraintSpec> as_value = specs;
  for (auto& spec : as_value) {
    const auto* integ = std::get_if<IntegratedTarget>(&spec.target);
    if (!integ)
      throw std::invalid_argument(
          "fit_lis_integrated: every derivative target needs an explicit antiderivative");
    spec.target = ValueTarget{integ->antiderivative, integ->name};
  }
  GcnnModel fitted = fit_lis_value(X, y, std::move(base), std::move(as_value), tol);
  fitted.specs = std::move(specs);
  fitted.scheme = Scheme::LisIntegrated;
  return fitted;
}

GcnnModel fit_gis_lagrange(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                           RbfModel base, const std::vector<PointConstraint>& constraints,
                           SvdTolerance tol) {
  check_fit_inputs(X, y, base);
  const Index p = base.num_centers() + 1;
  const Index c = static_cast<Index>(constraints.size());
  if (c > p)
    throw infeasible_error("fit_gis_lagrange: more point constraints than weight parameters");

  const Mat phi = feature_map(base, X);
  const Mat gram = phi.transpose() * phi;
  const Vec rhs = phi.transpose() * y;

  Mat rows(c, p);
  Vec values(c);
  for (Index i = 0; i < c; ++i) {
    const auto& pc = constraints[static_cast<std::size_t>(i)];
    if (pc.point.size() != base.dim())
      throw std::invalid_argument("fit_gis_lagrange: constraint point dimension mismatch");
    rows.row(i) = feature_map(base, pc.point.transpose()).row(0);
    values(i) = pc.value;
  }

  const KktSolution<double> sol = solve_kkt(gram, rhs, rows, values, tol);
  if (c > 0) {
    const double residual = (rows * sol.weights - values).cwiseAbs().maxCoeff();
    if (residual > 1e-8 * std::max(1.0, values.cwiseAbs().maxCoeff()))
      throw infeasible_error("fit_gis_lagrange: inconsistent point constraints");
  }
  base.weights = sol.weights;
  return GcnnModel{std::move(base), {}, Scheme::GisLagrange};
}

Vec initial_weights_from_unconstrained(const RbfModel& fitted) {
  if (!fitted.fitted())
    throw std::invalid_argument("initial_weights_from_unconstrained: model is not fitted");
  return fitted.weights;
}

}  // namespace gcnn
