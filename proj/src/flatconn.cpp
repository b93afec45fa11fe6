#include "mpsf/flatconn.hpp"

#include <cmath>
#include <limits>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpsf/errors.hpp"

namespace mpsf {

int TotalBundle::xi_slot(int factor) const {
  for (size_t j = 0; j < xi_factor.size(); ++j)
    if (xi_factor[j] == factor) return n + d + static_cast<int>(j);
  return -1;
}

Vector TotalBundle::line_signs(const MultiproductSpec& spec) const {
  Vector s = Vector::Ones(rank());
  for (size_t j = 0; j < xi_factor.size(); ++j) s(n + d + j) = spec.factor(xi_factor[j]).curvature > 0 ? 1 : -1;
  return s;
}

TotalBundle total_bundle(const GeometricDataset& ds) {
  TotalBundle b;
  b.n = ds.base_dim;
  b.d = ds.bundle_rank;
  for (int i = 0; i < ds.spec.num_factors(); ++i)
    if (ds.spec.curved(i)) b.xi_factor.push_back(i);
  return b;
}

Matrix bundle_gram(const GeometricDataset& ds, int node) {
  const TotalBundle b = total_bundle(ds);
  Matrix G = b.line_signs(ds.spec).asDiagonal();
  G.topLeftCorner(b.n, b.n) = ds.g[node];
  return G;
}

Matrix d_coefficients(const GeometricDataset& ds, const std::vector<Christoffel>& gamma, int k, int mu) {
  const TotalBundle bundle = total_bundle(ds);
  const int n = bundle.n, d = bundle.d;
  const Matrix& g = ds.g[k];
  const Matrix ginv = g.inverse();
  Matrix om = Matrix::Zero(bundle.rank(), bundle.rank());
  om.topLeftCorner(n, n) = gamma[k][mu];
  for (int a = 0; a < d; ++a) {
    om.block(n + a, 0, 1, n) = ds.B[k][a].row(mu);
    om.block(0, n + a, n, 1) = -ginv * ds.B[k][a].col(mu);
  }
  if (d > 0) om.block(n, n, d, d) = ds.connection(mu, k);
  for (size_t j = 0; j < bundle.xi_factor.size(); ++j) {
    const int i = bundle.xi_factor[j], x = n + d + static_cast<int>(j);
    const double c = ds.spec.factor(i).curvature, r = std::sqrt(std::abs(c)), sg = c > 0 ? 1.0 : -1.0;
    const Matrix& F = ds.f[i][k];
    const Matrix& H = ds.h[i][k];
    om.block(x, 0, 1, n) = -sg * r * (g * F).row(mu);
    if (d > 0) om.block(x, n, 1, d) = -sg * r * H.col(mu).transpose();
    om.block(0, x, n, 1) = r * F.col(mu);
    if (d > 0) om.block(n, x, d, 1) = r * H.col(mu);
  }
  return om;
}

Matrix d_coefficients(const GeometricDataset& ds, int iu, int iv, int dir) {
  std::vector<Christoffel> gamma(ds.num_nodes());
  const int k = ds.chart.index(iu, iv);
  gamma[k] = christoffels(ds.chart, ds.g, iu, iv);
  return d_coefficients(ds, gamma, k, dir);
}

ConnectionField connection_field(const GeometricDataset& ds) {
  ConnectionField cf;
  cf.bundle = total_bundle(ds);
  const auto gamma = christoffel_field(ds.chart, ds.g);
  for (int mu = 0; mu < 2; ++mu) {
    cf.omega[mu].resize(ds.num_nodes());
    for (int k = 0; k < ds.num_nodes(); ++k) cf.omega[mu][k] = d_coefficients(ds, gamma, k, mu);
  }
  return cf;
}

namespace {

Matrix gauge(const GeometricDataset& ds, int k, int rank) {
  Matrix p = Matrix::Identity(rank, rank);
  p.topLeftCorner(ds.base_dim, ds.base_dim) = metric_factor(ds.g[k]).transpose();
  return p;
}

Matrix gauge_inverse(const Matrix& p, int n) {
  Matrix q = p;
  q.topLeftCorner(n, n) =
      p.topLeftCorner(n, n).triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
  return q;
}

double field_residual(const GeometricDataset& ds, const ConnectionField& cf, const std::vector<Matrix>& gauges,
                      int iu, int iv) {
  const Chart& c = ds.chart;
  const int k = c.index(iu, iv);
  const auto& ou = cf.omega[0];
  const auto& ov = cf.omega[1];
  const Matrix r = fd::diff(ov, c, iu, iv, 0) - fd::diff(ou, c, iu, iv, 1) + ou[k] * ov[k] - ov[k] * ou[k];
  const Matrix& p = gauges[k];
  const Matrix hat = p * r * gauge_inverse(p, ds.base_dim);
  const double inv_area = 1 / metric_factor(ds.g[k]).diagonal().prod();
  return inv_area * spectral_norm(hat);
}

}  // namespace

std::vector<double> curvature_residual(const GeometricDataset& ds) {
  const ConnectionField cf = connection_field(ds);
  std::vector<Matrix> gauges(ds.num_nodes());
  for (int k = 0; k < ds.num_nodes(); ++k) gauges[k] = gauge(ds, k, cf.bundle.rank());
  std::vector<double> out(ds.num_nodes(), std::numeric_limits<double>::quiet_NaN());
  const Chart& c = ds.chart;
  for (int iv = 0; iv < c.nv; ++iv)
    for (int iu = 0; iu < c.nu; ++iu)
      if (c.interior(iu, iv, 2)) out[c.index(iu, iv)] = field_residual(ds, cf, gauges, iu, iv);
  return out;
}

double curvature_residual(const GeometricDataset& ds, int iu, int iv) {
  return curvature_residual(ds)[ds.chart.index(iu, iv)];
}

double max_curvature_residual(const GeometricDataset& ds) {
  double m = 0;
  for (double r : curvature_residual(ds))
    if (!std::isnan(r)) m = std::max(m, r);
  return m;
}

OrthonormalConnection orthonormal_connection(const GeometricDataset& ds) {
  const ConnectionField cf = connection_field(ds);
  OrthonormalConnection oc;
  oc.bundle = cf.bundle;
  oc.signs = cf.bundle.line_signs(ds.spec);
  const int nodes = ds.num_nodes(), rank = cf.bundle.rank(), n = ds.base_dim;
  oc.gauge.resize(nodes);
  oc.gauge_inverse.resize(nodes);
  for (int k = 0; k < nodes; ++k) {
    oc.gauge[k] = gauge(ds, k, rank);
    oc.gauge_inverse[k] = gauge_inverse(oc.gauge[k], n);
  }
  const Chart& c = ds.chart;
  for (int mu = 0; mu < 2; ++mu) {
    oc.omega[mu].resize(nodes);
    for (int iv = 0; iv < c.nv; ++iv)
      for (int iu = 0; iu < c.nu; ++iu) {
        const int k = c.index(iu, iv);
        const Matrix dp = fd::diff(oc.gauge, c, iu, iv, mu);
        const Matrix hat = oc.gauge[k] * cf.omega[mu][k] * oc.gauge_inverse[k] - dp * oc.gauge_inverse[k];
        oc.omega[mu][k] = form_skew_part(hat, oc.signs);
      }
  }
  return oc;
}

Matrix transport_step(const Matrix& omega_a, const Matrix& omega_b, double h, const Matrix& sigma,
                      TransportScheme scheme) {
  auto a_at = [&](double s) -> Matrix { return -((1 - s) * omega_a + s * omega_b); };
  if (scheme == TransportScheme::magnus4) {
    const double c1 = 0.5 - std::sqrt(3.0) / 6, c2 = 0.5 + std::sqrt(3.0) / 6;
    const Matrix a1 = a_at(c1), a2 = a_at(c2);
    const Matrix m = (h / 2) * (a1 + a2) + (std::sqrt(3.0) / 12) * h * h * (a2 * a1 - a1 * a2);
    return m.exp() * sigma;
  }
  const Matrix a0 = a_at(0), ah = a_at(0.5), a1 = a_at(1);
  const Matrix k1 = a0 * sigma;
  const Matrix k2 = ah * (sigma + (h / 2) * k1);
  const Matrix k3 = ah * (sigma + (h / 2) * k2);
  const Matrix k4 = a1 * (sigma + h * k3);
  return sigma + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

Matrix parallel_transport(const std::vector<Matrix>& omega, const std::vector<double>& steps, const Matrix& sigma0,
                          TransportScheme scheme) {
  if (omega.size() != steps.size() + 1)
    throw std::invalid_argument("parallel_transport: need one coefficient per path node");
  Matrix sigma = sigma0;
  for (size_t k = 0; k < steps.size(); ++k) sigma = transport_step(omega[k], omega[k + 1], steps[k], sigma, scheme);
  return sigma;
}

Matrix bundle_projection(const GeometricDataset& ds, int k, int i) {
  const TotalBundle b = total_bundle(ds);
  const int n = b.n, d = b.d;
  const Matrix L = metric_factor(ds.g[k]);
  const Matrix Lt = L.transpose();
  const Matrix P = Lt.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
  const Matrix S = derive_adjoint_s(ds, k, i);
  Matrix pi = Matrix::Zero(b.rank(), b.rank());
  pi.topLeftCorner(n, n) = Lt * ds.f[i][k] * P;
  if (d > 0) {
    pi.block(0, n, n, d) = Lt * S;
    pi.block(n, 0, d, n) = ds.h[i][k] * P;
    pi.block(n, n, d, d) = ds.t[i][k];
  }
  const int x = b.xi_slot(i);
  if (x >= 0) pi(x, x) = 1;
  return pi;
}

Matrix eigenbundle_seed(const GeometricDataset& ds, int k) {
  const TotalBundle b = total_bundle(ds);
  const int n = b.n, d = b.d;
  Matrix seed(b.rank(), 0);
  for (int i = 0; i < ds.spec.num_factors(); ++i) {
    const Matrix pi = bundle_projection(ds, k, i);
    const Matrix block = pi.topLeftCorner(n + d, n + d);
    Eigen::SelfAdjointEigenSolver<Matrix> es((block + block.transpose()) / 2);
    std::vector<Vector> cols;
    const int x = b.xi_slot(i);
    if (x >= 0) {
      Vector v = Vector::Zero(b.rank());
      // The upper hyperboloid sheet needs the seed -xi^ when c_i < 0.
      v(x) = ds.spec.factor(i).curvature > 0 ? 1 : -1;
      cols.push_back(v);
    }
    int found = 0;
    for (int e = static_cast<int>(es.eigenvalues().size()) - 1; e >= 0; --e) {
      if (es.eigenvalues()(e) <= 0.5) continue;
      Vector v = Vector::Zero(b.rank());
      v.head(n + d) = es.eigenvectors().col(e);
      cols.push_back(v);
      ++found;
    }
    const int expected = ds.spec.factor(i).dim;
    if (found != expected)
      throw RankConditionError(i + 1, expected, found,
                               "rank condition fails for factor " + std::to_string(i + 1) + ": eigenbundle of pi_" +
                                   std::to_string(i + 1) + " on TM+E has dimension " + std::to_string(found) +
                                   ", expected " + std::to_string(expected));
    const int old = static_cast<int>(seed.cols());
    seed.conservativeResize(Eigen::NoChange, old + static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) seed.col(old + j) = cols[j];
  }
  return seed;
}

namespace {

// Transport along a row (dir 0) or column (dir 1) from `start` to both ends.
void sweep_line(const OrthonormalConnection& oc, const Chart& c, int dir, int fixed, int start,
                std::vector<Matrix>& frames, TransportScheme scheme) {
  const int len = c.size(dir);
  const double h = c.spacing(dir);
  auto idx = [&](int j) { return dir == 0 ? c.index(j, fixed) : c.index(fixed, j); };
  for (int j = start; j + 1 < len; ++j)
    frames[idx(j + 1)] = transport_step(oc.omega[dir][idx(j)], oc.omega[dir][idx(j + 1)], h, frames[idx(j)], scheme);
  for (int j = start; j - 1 >= 0; --j)
    frames[idx(j - 1)] = transport_step(oc.omega[dir][idx(j)], oc.omega[dir][idx(j - 1)], -h, frames[idx(j)], scheme);
}

std::vector<Matrix> sweep(const OrthonormalConnection& oc, const Chart& c, NodeIndex base, const Matrix& seed,
                          bool rows_first, TransportScheme scheme) {
  std::vector<Matrix> frames(c.num_nodes());
  frames[c.index(base.iu, base.iv)] = seed;
  if (rows_first) {
    sweep_line(oc, c, 0, base.iv, base.iu, frames, scheme);
    for (int iu = 0; iu < c.nu; ++iu) sweep_line(oc, c, 1, iu, base.iv, frames, scheme);
  } else {
    sweep_line(oc, c, 1, base.iu, base.iv, frames, scheme);
    for (int iv = 0; iv < c.nv; ++iv) sweep_line(oc, c, 0, iv, base.iu, frames, scheme);
  }
  return frames;
}

}  // namespace

ParallelFrame build_parallel_frame(const GeometricDataset& ds, NodeIndex base, const Matrix& seed,
                                   TransportScheme scheme) {
  const Chart& c = ds.chart;
  if (base.iu < 0 || base.iu >= c.nu || base.iv < 0 || base.iv >= c.nv)
    throw std::invalid_argument("base node outside the chart");
  const OrthonormalConnection oc = orthonormal_connection(ds);
  if (seed.rows() != oc.bundle.rank() || seed.cols() != oc.bundle.rank())
    throw std::invalid_argument("seed must be a square matrix of the bundle rank");

  ParallelFrame pf;
  pf.bundle = oc.bundle;
  pf.base = base;
  pf.column_offset = {0};
  for (int i = 0; i < ds.spec.num_factors(); ++i)
    pf.column_offset.push_back(pf.column_offset.back() + ds.spec.factor(i).dim + (ds.spec.curved(i) ? 1 : 0));
  const Vector& eta = oc.signs;
  pf.column_signs = (seed.transpose() * eta.asDiagonal() * seed).diagonal().array().sign().matrix();

  const auto rows_first = sweep(oc, c, base, seed, true, scheme);
  const auto cols_first = sweep(oc, c, base, seed, false, scheme);

  const Matrix gram0 = seed.transpose() * eta.asDiagonal() * seed;
  std::vector<Matrix> projections;
  for (int k = 0; k < ds.num_nodes(); ++k) {
    pf.sweep_discrepancy = std::max(pf.sweep_discrepancy, spectral_norm(rows_first[k] - cols_first[k]));
    const Matrix& s = rows_first[k];
    pf.gram_drift =
        std::max(pf.gram_drift, (s.transpose() * eta.asDiagonal() * s - gram0).cwiseAbs().maxCoeff());
    for (int i = 0; i < ds.spec.num_factors(); ++i) {
      const int o = pf.column_offset[i], w = pf.column_offset[i + 1] - o;
      const Matrix cols = s.middleCols(o, w);
      pf.eigenbundle_drift =
          std::max(pf.eigenbundle_drift, spectral_norm(bundle_projection(ds, k, i) * cols - cols));
    }
  }
  if (c.periodic_u)
    for (int iv = 0; iv < c.nv; ++iv)
      pf.deck_mismatch_u = std::max(
          pf.deck_mismatch_u, spectral_norm(rows_first[c.index(c.nu - 1, iv)] - rows_first[c.index(0, iv)]));
  if (c.periodic_v)
    for (int iu = 0; iu < c.nu; ++iu)
      pf.deck_mismatch_v = std::max(
          pf.deck_mismatch_v, spectral_norm(rows_first[c.index(iu, c.nv - 1)] - rows_first[c.index(iu, 0)]));

  pf.sections.resize(ds.num_nodes());
  for (int k = 0; k < ds.num_nodes(); ++k) pf.sections[k] = oc.gauge_inverse[k] * rows_first[k];
  return pf;
}

ParallelFrame build_parallel_frame(const GeometricDataset& ds, NodeIndex base, TransportScheme scheme) {
  return build_parallel_frame(ds, base, eigenbundle_seed(ds, ds.chart.index(base.iu, base.iv)), scheme);
}

}  // namespace mpsf
