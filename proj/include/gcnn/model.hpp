#pragma once

#include <string_view>
#include <vector>

#include "gcnn/constraints.hpp"
#include "gcnn/rbf.hpp"

namespace gcnn {

enum class Scheme {
  Unconstrained,
  LisValue,       // blended prediction, value targets imposed exactly on the set
  LisDerivative,  // derivative targets weighted into the objective; plain prediction
  LisIntegrated,  // derivative targets imposed through their antiderivative; blended
  GisLagrange,    // exact point-wise equality constraints via the KKT system
};

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(std::string_view name);

/// An RBF model together with the constraints it was fitted under.
struct GcnnModel {
  RbfModel base;
  std::vector<ConstraintSpec> specs;
  Scheme scheme = Scheme::Unconstrained;
};

struct PointConstraint {
  Vec point;
  double value = 0.0;
};

/// Model output. Blended schemes return
///   (1 - psi(x)) * Phi(x) W + psi(x) * f_C(project(x)),
/// which reproduces the target exactly on the constraint set; the other
/// schemes return Phi(x) W.
Vec predict_constrained(const GcnnModel& model, const Eigen::Ref<const Mat>& X);

/// Analytic derivative of predict_constrained along one axis. For blended
/// schemes this differentiates the blend:
///   (1-psi) f' + psi' (f_C - f) + psi f_C'.
Vec predict_constrained_derivative(const GcnnModel& model, const Eigen::Ref<const Mat>& X,
                                   Index axis);

/// Value-constraint fit. With D = diag(1 - psi(x_i)), solves
///   min_W | (y - psi .* f_C) - D Phi W |^2
/// through least squares on the row-scaled design D Phi, i.e.
///   W = (Phi^T D^2 Phi)^+ Phi^T D (y - psi .* f_C).
GcnnModel fit_lis_value(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                        RbfModel base, std::vector<ConstraintSpec> specs, SvdTolerance tol = {});

/// Derivative-constraint fit. Minimizes
///   sum_i (1 - psi_i) (y_i - f(x_i))^2 + sum_i psi_i (df/dx_k(x_i) - g(x_i))^2
/// through the stacked normal equations; prediction stays un-blended.
GcnnModel fit_lis_derivative(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                             RbfModel base, std::vector<ConstraintSpec> specs,
                             SvdTolerance tol = {});

/// Replaces each integrated derivative target by a value target built from its
/// antiderivative and runs the value-constraint fit; predictions stay blended,
/// so the boundary derivative is reproduced exactly.
GcnnModel fit_lis_integrated(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                             RbfModel base, std::vector<ConstraintSpec> specs,
                             SvdTolerance tol = {});

/// Lagrange-multiplier baseline: minimizes |y - Phi W|^2 subject to
/// Phi(x_c) W = v_c for every point constraint, solved exactly through the
/// KKT system.
GcnnModel fit_gis_lagrange(const Eigen::Ref<const Mat>& X, const Eigen::Ref<const Vec>& y,
                           RbfModel base, const std::vector<PointConstraint>& constraints,
                           SvdTolerance tol = {});

/// Weights of a fitted unconstrained model, used as the paired-network
/// reference for the coupling and weight-change diagnostics.
Vec initial_weights_from_unconstrained(const RbfModel& fitted);

}  // namespace gcnn
