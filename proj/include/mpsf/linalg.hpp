#pragma once

#include <Eigen/Dense>

namespace mpsf {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

// Largest singular value; 0 for empty matrices.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return Scalar(0);
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(m.eval());
  return svd.singularValues()(0);
}

// Part of `m` that is skew with respect to the diagonal form `signs`:
// the projection onto {K : K^T diag(s) + diag(s) K = 0}.
template <typename Derived, typename SignDerived>
MatrixX<typename Derived::Scalar> form_skew_part(const Eigen::MatrixBase<Derived>& m,
                                                 const Eigen::MatrixBase<SignDerived>& signs) {
  const auto eta = signs.asDiagonal();
  return (m - eta * m.transpose() * eta) / 2;
}

// Number of singular values above rel_tol * sigma_max.
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixX<typename Derived::Scalar>> svd(m.eval());
  const auto& sv = svd.singularValues();
  if (sv(0) == 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

}  // namespace mpsf
