#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mpsf/errors.hpp"
#include "mpsf/multiproduct.hpp"

namespace mpsf {

// Points and vectors of E_1 x ... x E_m are flat coordinate rows in factor order.
using AmbientPoint = Vector;
using AmbientVector = Vector;

namespace detail {
template <typename Derived>
void check_ambient_size(const Eigen::MatrixBase<Derived>& x, const MultiproductSpec& spec) {
  if (x.size() == spec.ambient_dim()) return;
  // Name the first factor whose block does not fit.
  int i = 0;
  while (i + 1 < spec.num_factors() && spec.ambient_offset(i + 1) <= x.size()) ++i;
  throw DimensionMismatch(i + 1, "ambient vector has " + std::to_string(x.size()) +
                                     " coordinates, expected " + std::to_string(spec.ambient_dim()) +
                                     " (factor " + std::to_string(i + 1) + " block is incomplete)");
}
}  // namespace detail

// Indefinite inner product of factor i's blocks of a and b.
template <typename DA, typename DB>
typename DA::Scalar factor_inner(const MultiproductSpec& spec, int i, const Eigen::MatrixBase<DA>& a,
                                 const Eigen::MatrixBase<DB>& b) {
  const int o = spec.ambient_offset(i), k = spec.ambient_dim(i);
  auto s = a.segment(o, k).dot(b.segment(o, k));
  if (spec.factor(i).curvature < 0) s -= 2 * a(o) * b(o);
  return s;
}

template <typename DA, typename DB>
typename DA::Scalar ambient_inner(const MultiproductSpec& spec, const Eigen::MatrixBase<DA>& a,
                                  const Eigen::MatrixBase<DB>& b) {
  typename DA::Scalar s(0);
  for (int i = 0; i < spec.num_factors(); ++i) s += factor_inner(spec, i, a, b);
  return s;
}

// Block-selection projection onto factor i.
template <typename Derived>
VectorX<typename Derived::Scalar> factor_projection(const MultiproductSpec& spec, int i,
                                                    const Eigen::MatrixBase<Derived>& x) {
  VectorX<typename Derived::Scalar> p = VectorX<typename Derived::Scalar>::Zero(x.size());
  p.segment(spec.ambient_offset(i), spec.ambient_dim(i)) = x.segment(spec.ambient_offset(i), spec.ambient_dim(i));
  return p;
}

// |<x^i, x^i>_i - 1/c_i| per factor; 0 for a flat factor.
template <typename Derived>
std::vector<typename Derived::Scalar> factor_constraint_residual(const Eigen::MatrixBase<Derived>& p,
                                                                 const MultiproductSpec& spec) {
  detail::check_ambient_size(p, spec);
  std::vector<typename Derived::Scalar> r(spec.num_factors(), 0);
  for (int i = 0; i < spec.num_factors(); ++i) {
    const double c = spec.factor(i).curvature;
    if (c != 0) r[i] = std::abs(factor_inner(spec, i, p, p) - 1 / c);
  }
  return r;
}

// R(X,Y)Z = sum_i c_i [<pi_i Y, pi_i Z> pi_i X - <pi_i X, pi_i Z> pi_i Y].
template <typename DX, typename DY, typename DZ>
VectorX<typename DX::Scalar> ambient_curvature(const MultiproductSpec& spec, const Eigen::MatrixBase<DX>& x,
                                               const Eigen::MatrixBase<DY>& y,
                                               const Eigen::MatrixBase<DZ>& z) {
  detail::check_ambient_size(x, spec);
  detail::check_ambient_size(y, spec);
  detail::check_ambient_size(z, spec);
  VectorX<typename DX::Scalar> r = VectorX<typename DX::Scalar>::Zero(x.size());
  for (int i = 0; i < spec.num_factors(); ++i) {
    const double c = spec.factor(i).curvature;
    if (c == 0) continue;
    const int o = spec.ambient_offset(i), k = spec.ambient_dim(i);
    r.segment(o, k) = c * (factor_inner(spec, i, y, z) * x.segment(o, k) - factor_inner(spec, i, x, z) * y.segment(o, k));
  }
  return r;
}

// Distance in factor i between the blocks of a and b, via the chord length
// (2r asin(chord/2r) on spheres, 2r asinh(chord/2r) on hyperboloids).
double factor_geodesic_distance(const MultiproductSpec& spec, int i, const Vector& a, const Vector& b);

// Per-factor isometry x -> linear * x + translation (translation is zero for
// curved factors).
struct FactorIsometry {
  Matrix linear;
  Vector translation;
};

struct IsometryAlignment {
  std::vector<FactorIsometry> blocks;
  // Sup over points of the per-factor distances combined in quadrature.
  double residual = 0;

  AmbientPoint apply(const MultiproductSpec& spec, const AmbientPoint& x) const;
  // Largest deviation of a block from preserving its factor's quadratic form.
  double form_preservation_error(const MultiproductSpec& spec) const;
};

struct AlignOptions {
  // Accept rank-deficient clouds (e.g. a slice whose second factor is a point);
  // the returned map is then one of the minimizers.
  bool allow_degenerate = false;
};

// Least-squares form-preserving map sending `from` onto `to`, factor by factor:
// orthogonal Procrustes on spheres, Lorentz Procrustes on hyperboloids, rigid
// registration on the flat factor.
IsometryAlignment align_isometry(std::span<const AmbientPoint> from, std::span<const AmbientPoint> to,
                                 const MultiproductSpec& spec, const AlignOptions& options = {});

// Sup over i of the combined per-factor distance between a[i] and b[i].
double sup_distance(const MultiproductSpec& spec, std::span<const AmbientPoint> a,
                    std::span<const AmbientPoint> b);

}  // namespace mpsf
