#pragma once

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mpsf/ambient.hpp"
#include "mpsf/chart.hpp"

namespace mpsf::test {

// Residuals at or below this are roundoff; a refinement pair whose finer value
// sits under it counts as converged regardless of the ratio.
inline constexpr double kExactFloor = 1e-9;

inline double grid_h(const Chart& c) { return std::max(c.hu, c.hv); }

inline double order(double h1, double r1, double h2, double r2) { return std::log(r1 / r2) / std::log(h1 / h2); }

// Least-squares slope of log r against log h.
inline double fitted_order(const std::vector<double>& h, const std::vector<double>& r) {
  const int n = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(r[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// True when every consecutive pair either reaches the floor or has an order in
// [lo, hi].
inline bool converges(const std::vector<double>& h, const std::vector<double>& r, double lo, double hi) {
  for (size_t i = 0; i + 1 < h.size(); ++i) {
    if (r[i + 1] <= kExactFloor) continue;
    const double p = order(h[i], r[i], h[i + 1], r[i + 1]);
    if (!(p >= lo && p <= hi)) return false;
  }
  return true;
}

inline bool all_exact(const std::vector<double>& r) {
  return std::all_of(r.begin(), r.end(), [](double x) { return x <= kExactFloor; });
}

inline double nan_max(const std::vector<double>& v) {
  double m = 0;
  for (double x : v)
    if (!std::isnan(x)) m = std::max(m, x);
  return m;
}

inline Matrix random_orthogonal(int n, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Matrix a(n, n);
  for (int i = 0; i < a.size(); ++i) a(i) = nd(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // Fix the column signs so the distribution does not depend on QR conventions.
  const Vector dg = qr.matrixQR().diagonal();
  for (int j = 0; j < n; ++j)
    if (dg(j) < 0) q.col(j) *= -1;
  return q;
}

// Orthochronous Lorentz map of R^{1,k}: a spatial rotation followed by a boost.
inline Matrix random_lorentz(int dim, std::mt19937& rng) {
  std::uniform_real_distribution<double> ud(-0.8, 0.8);
  const int k = dim - 1;
  Matrix rot = Matrix::Identity(dim, dim);
  rot.bottomRightCorner(k, k) = random_orthogonal(k, rng);
  Vector n = random_orthogonal(k, rng).col(0);
  const double beta = ud(rng), ch = std::cosh(beta), sh = std::sinh(beta);
  Matrix boost = Matrix::Identity(dim, dim);
  boost(0, 0) = ch;
  boost.block(0, 1, 1, k) = sh * n.transpose();
  boost.block(1, 0, k, 1) = sh * n;
  boost.bottomRightCorner(k, k) += (ch - 1) * n * n.transpose();
  return boost * rot;
}

// Random isometry of the product, factor by factor.
inline IsometryAlignment random_isometry(const MultiproductSpec& spec, std::mt19937& rng) {
  std::uniform_real_distribution<double> ud(-2, 2);
  IsometryAlignment iso;
  for (int i = 0; i < spec.num_factors(); ++i) {
    const int k = spec.ambient_dim(i);
    FactorIsometry b;
    b.translation = Vector::Zero(k);
    if (spec.factor(i).curvature > 0) {
      b.linear = random_orthogonal(k, rng);
    } else if (spec.factor(i).curvature < 0) {
      b.linear = random_lorentz(k, rng);
    } else {
      b.linear = random_orthogonal(k, rng);
      for (int j = 0; j < k; ++j) b.translation(j) = ud(rng);
    }
    iso.blocks.push_back(b);
  }
  return iso;
}

inline std::vector<AmbientPoint> apply_all(const IsometryAlignment& iso, const MultiproductSpec& spec,
                                           const std::vector<AmbientPoint>& pts) {
  std::vector<AmbientPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(iso.apply(spec, p));
  return out;
}

}  // namespace mpsf::test
