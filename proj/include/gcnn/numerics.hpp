#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "gcnn/types.hpp"

namespace gcnn {

/// Singular values below relative_cutoff * s_max are treated as zero.
struct SvdTolerance {
  double relative_cutoff = 1e-12;
};

/// Moore-Penrose pseudo-inverse via SVD.
///
/// If rank_out is non-null it receives the numerical rank under the cutoff.
template <typename Derived>
MatrixX<typename Derived::Scalar> pseudo_inverse(const Eigen::MatrixBase<Derived>& a,
                                                 SvdTolerance tol = {},
                                                 Index* rank_out = nullptr) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0 || a.cols() == 0)
    throw std::invalid_argument("pseudo_inverse: matrix must be nonempty");
  if (!a.allFinite()) throw std::invalid_argument("pseudo_inverse: non-finite entries");
  if (!(tol.relative_cutoff > 0))
    throw std::invalid_argument("pseudo_inverse: relative_cutoff must be positive");

  Eigen::BDCSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorX<Scalar>& s = svd.singularValues();
  const Scalar cutoff = (s.size() > 0 ? s(0) : Scalar(0)) * Scalar(tol.relative_cutoff);

  VectorX<Scalar> inv = VectorX<Scalar>::Zero(s.size());
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > Scalar(0)) {
      inv(i) = Scalar(1) / s(i);
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Minimum-norm minimizer of sum_i w_i * (rhs_i - (design * x)_i)^2.
///
/// Solved through the pseudo-inverse of the weighted Gram matrix,
///   x = (design^T D design)^+ design^T D rhs,  D = diag(row_weights),
/// so rank-deficient designs yield the minimum-norm minimizer.
template <typename DerivedA, typename DerivedY, typename DerivedW>
VectorX<typename DerivedA::Scalar> weighted_least_squares(
    const Eigen::MatrixBase<DerivedA>& design, const Eigen::MatrixBase<DerivedY>& rhs,
    const Eigen::MatrixBase<DerivedW>& row_weights, SvdTolerance tol = {}) {
  using Scalar = typename DerivedA::Scalar;
  if (rhs.cols() != 1 || row_weights.cols() != 1)
    throw std::invalid_argument("weighted_least_squares: rhs and weights must be column vectors");
  if (design.rows() != rhs.rows() || design.rows() != row_weights.rows())
    throw std::invalid_argument("weighted_least_squares: row count mismatch");
  if (!design.allFinite() || !rhs.allFinite() || !row_weights.allFinite())
    throw std::invalid_argument("weighted_least_squares: non-finite input");
  const VectorX<Scalar> w = row_weights.derived();
  if ((w.array() < Scalar(0)).any())
    throw std::invalid_argument("weighted_least_squares: negative row weight");

  const MatrixX<Scalar> weighted = w.asDiagonal() * design.derived();
  const MatrixX<Scalar> gram = design.derived().transpose() * weighted;
  const VectorX<Scalar> b = design.derived().transpose() * w.cwiseProduct(rhs.derived().eval());
  return pseudo_inverse(gram, tol) * b;
}

template <typename Scalar>
struct KktSolution {
  VectorX<Scalar> weights;
  VectorX<Scalar> multipliers;
  /// Set when either the constraint rows or the reduced Hessian lost rank and
  /// the solve fell back to pseudo-inverses.
  bool rank_deficient = false;
};

/// Minimizes q(x) = x^T G x - 2 rhs^T x subject to A x = b.
///
/// Null-space elimination: x = A^+ b + Z q with Z an orthonormal basis of
/// null(A), then the reduced system (Z^T G Z) q = Z^T (rhs - G A^+ b). One
/// residual-correction pass follows; no further refinement. Multipliers
/// satisfy the stationarity relation G x - rhs + A^T lambda = 0.
template <typename DerivedG, typename DerivedR, typename DerivedA, typename DerivedB>
KktSolution<typename DerivedG::Scalar> solve_kkt(const Eigen::MatrixBase<DerivedG>& gram,
                                                 const Eigen::MatrixBase<DerivedR>& rhs,
                                                 const Eigen::MatrixBase<DerivedA>& constraint_rows,
                                                 const Eigen::MatrixBase<DerivedB>& constraint_rhs,
                                                 SvdTolerance tol = {}) {
  using Scalar = typename DerivedG::Scalar;
  const Index p = gram.rows();
  const Index c = constraint_rows.rows();
  if (gram.cols() != p) throw std::invalid_argument("solve_kkt: gram must be square");
  if (rhs.rows() != p || rhs.cols() != 1)
    throw std::invalid_argument("solve_kkt: rhs size mismatch");
  if (constraint_rhs.rows() != c || (c > 0 && constraint_rhs.cols() != 1))
    throw std::invalid_argument("solve_kkt: constraint rhs size mismatch");
  if (c > 0 && constraint_rows.cols() != p)
    throw std::invalid_argument("solve_kkt: constraint column count mismatch");
  if (!gram.allFinite() || !rhs.allFinite())
    throw std::invalid_argument("solve_kkt: non-finite input");
  const Scalar gscale = gram.derived().cwiseAbs().maxCoeff();
  if ((gram.derived() - gram.derived().transpose()).cwiseAbs().maxCoeff() >
      Scalar(1e-8) * std::max(Scalar(1), gscale))
    throw std::invalid_argument("solve_kkt: gram must be symmetric");

  KktSolution<Scalar> out;

  if (c == 0) {
    Index grank = 0;
    out.weights = pseudo_inverse(gram, tol, &grank) * rhs.derived();
    out.multipliers.resize(0);
    out.rank_deficient = grank < p;
    return out;
  }

  Eigen::JacobiSVD<MatrixX<Scalar>> asvd(constraint_rows.derived(),
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorX<Scalar>& s = asvd.singularValues();
  const Scalar cutoff = (s.size() > 0 ? s(0) : Scalar(0)) * Scalar(tol.relative_cutoff);
  Index r = 0;
  while (r < s.size() && s(r) > cutoff && s(r) > Scalar(0)) ++r;
  out.rank_deficient = r < c;

  const auto a_pinv_apply = [&](const VectorX<Scalar>& v) -> VectorX<Scalar> {
    return asvd.matrixV().leftCols(r) *
           (s.head(r).cwiseInverse().cwiseProduct(asvd.matrixU().leftCols(r).transpose() * v));
  };

  VectorX<Scalar> x = a_pinv_apply(constraint_rhs.derived());

  const Index nz = p - r;
  MatrixX<Scalar> z;
  MatrixX<Scalar> reduced_pinv;
  if (nz > 0) {
    z = asvd.matrixV().rightCols(nz);
    Index hrank = 0;
    const MatrixX<Scalar> reduced = z.transpose() * gram.derived() * z;
    reduced_pinv = pseudo_inverse(reduced, tol, &hrank);
    out.rank_deficient = out.rank_deficient || hrank < nz;
    x += z * (reduced_pinv * (z.transpose() * (rhs.derived() - gram.derived() * x)));
  }

  // one residual-correction pass: restore feasibility, then re-optimize in the null space
  x += a_pinv_apply(constraint_rhs.derived() - constraint_rows.derived() * x);
  if (nz > 0) x += z * (reduced_pinv * (z.transpose() * (rhs.derived() - gram.derived() * x)));

  const VectorX<Scalar> grad_gap = rhs.derived() - gram.derived() * x;
  out.multipliers = asvd.matrixU().leftCols(r) *
                    (s.head(r).cwiseInverse().cwiseProduct(asvd.matrixV().leftCols(r).transpose() * grad_gap));
  out.weights = std::move(x);
  return out;
}

}  // namespace gcnn
