#include "mpsf/dataset.hpp"

#include <cmath>
#include <string>

#include "mpsf/errors.hpp"

namespace mpsf {

namespace {

std::string node_text(const NodeIndex& n) { return "(" + std::to_string(n.iu) + "," + std::to_string(n.iv) + ")"; }

void require_size(const std::string& field, size_t got, size_t want) {
  if (got != want)
    throw ValidationError(field, field + ": expected " + std::to_string(want) + " entries, got " + std::to_string(got));
}

void require_shape(const std::string& field, const Matrix& m, int rows, int cols, const NodeIndex& node) {
  if (m.rows() != rows || m.cols() != cols)
    throw ValidationError(field, field + " at node " + node_text(node) + " has shape " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                                     std::to_string(cols),
                          node);
  if (!m.allFinite()) throw ValidationError(field, field + " at node " + node_text(node) + " is not finite", node);
}

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

// Seam nodes of a periodic direction must carry identical data.
template <typename Get>
void check_seam(const GeometricDataset& ds, const std::string& field, Get get) {
  const Chart& c = ds.chart;
  auto compare = [&](int a, int b) {
    const Matrix& x = get(a);
    const Matrix& y = get(b);
    if ((x - y).cwiseAbs().maxCoeff() > 1e-12 * scale_of(x))
      throw ValidationError(field, field + " is not periodic at node " + node_text(c.node(b)), c.node(b));
  };
  if (c.periodic_u)
    for (int iv = 0; iv < c.nv; ++iv) compare(c.index(0, iv), c.index(c.nu - 1, iv));
  if (c.periodic_v)
    for (int iu = 0; iu < c.nu; ++iu) compare(c.index(iu, 0), c.index(iu, c.nv - 1));
}

}  // namespace

bool operator==(const GeometricDataset& a, const GeometricDataset& b) {
  return a.spec == b.spec && a.chart == b.chart && a.base_dim == b.base_dim && a.bundle_rank == b.bundle_rank &&
         a.g == b.g && a.B == b.B && a.conn_u == b.conn_u && a.conn_v == b.conn_v && a.f == b.f && a.h == b.h &&
         a.t == b.t;
}

Matrix OperatorQuadruple::block() const {
  const int n = static_cast<int>(f.rows()), d = static_cast<int>(t.rows());
  Matrix p(n + d, n + d);
  p << f, s, h, t;
  return p;
}

Matrix metric_factor(const Matrix& g) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw ValidationError("g", "metric is not positive definite");
  return llt.matrixL();
}

Matrix derive_adjoint_s(const Matrix& g, const Matrix& h) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw ValidationError("g", "metric is singular or indefinite");
  return llt.solve(h.transpose());
}

Matrix derive_adjoint_s(const GeometricDataset& ds, int node, int i) { return derive_adjoint_s(ds.g[node], ds.h[i][node]); }

Matrix derive_adjoint_h(const Matrix& g, const Matrix& s) { return s.transpose() * g; }

OperatorQuadruple operator_quadruple(const GeometricDataset& ds, int node, int i) {
  return {ds.f[i][node], ds.h[i][node], derive_adjoint_s(ds, node, i), ds.t[i][node]};
}

Matrix shape_operator(const std::vector<Matrix>& B, const Vector& xi, const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  Matrix lowered = Matrix::Zero(n, n);
  for (size_t a = 0; a < B.size(); ++a) lowered += xi(a) * B[a];
  return g.llt().solve(lowered);
}

Christoffel christoffels(const Chart& chart, const std::vector<Matrix>& g, int iu, int iv) {
  const Matrix& gn = g[chart.index(iu, iv)];
  const int n = static_cast<int>(gn.rows());
  const std::array<Matrix, 2> dg = {fd::diff(g, chart, iu, iv, 0), fd::diff(g, chart, iu, iv, 1)};
  const Matrix ginv = gn.inverse();
  Christoffel out;
  for (int mu = 0; mu < 2; ++mu) {
    // Lowered symbols Gamma_{b, mu c} = (d_mu g_bc + d_c g_b mu - d_b g_mu c) / 2.
    Matrix low(n, n);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) low(b, c) = 0.5 * (dg[mu](b, c) + dg[c](b, mu) - dg[b](mu, c));
    out[mu] = ginv * low;
  }
  return out;
}

std::vector<Christoffel> christoffel_field(const Chart& chart, const std::vector<Matrix>& g) {
  std::vector<Christoffel> out(g.size());
  for (int iv = 0; iv < chart.nv; ++iv)
    for (int iu = 0; iu < chart.nu; ++iu) out[chart.index(iu, iv)] = christoffels(chart, g, iu, iv);
  return out;
}

GeometricDataset transform_normal_frame(const GeometricDataset& ds, const Matrix& q) {
  GeometricDataset out = ds;
  const int d = ds.bundle_rank;
  for (int k = 0; k < ds.num_nodes(); ++k) {
    for (int b = 0; b < d; ++b) {
      out.B[k][b].setZero();
      for (int a = 0; a < d; ++a) out.B[k][b] += q(a, b) * ds.B[k][a];
    }
    out.conn_u[k] = q.transpose() * ds.conn_u[k] * q;
    out.conn_v[k] = q.transpose() * ds.conn_v[k] * q;
    for (int i = 0; i < ds.spec.num_factors(); ++i) {
      out.h[i][k] = q.transpose() * ds.h[i][k];
      out.t[i][k] = q.transpose() * ds.t[i][k] * q;
    }
  }
  return out;
}

void validate_dataset(const GeometricDataset& ds) {
  validate_chart(ds.chart);
  const int n = ds.base_dim, d = ds.bundle_rank, m = ds.spec.num_factors();
  if (m == 0) throw ValidationError("factors", "multiproduct has no factors");
  if (n < 1 || d < 0) throw ValidationError("base_dim", "base_dim must be >= 1 and bundle_rank >= 0");
  if (ds.spec.product_dim() != n + d)
    throw ValidationError("factors", "sum of factor dimensions is " + std::to_string(ds.spec.product_dim()) +
                                         " but base_dim + bundle_rank is " + std::to_string(n + d));
  if (n != 2) throw ValidationError("base_dim", "chart data require base_dim = 2");

  const size_t nodes = ds.num_nodes();
  require_size("g", ds.g.size(), nodes);
  require_size("B", ds.B.size(), nodes);
  require_size("e_connection_u", ds.conn_u.size(), nodes);
  require_size("e_connection_v", ds.conn_v.size(), nodes);
  require_size("f", ds.f.size(), m);
  require_size("h", ds.h.size(), m);
  require_size("t", ds.t.size(), m);
  for (int i = 0; i < m; ++i) {
    const std::string tag = "_" + std::to_string(i + 1);
    require_size("f" + tag, ds.f[i].size(), nodes);
    require_size("h" + tag, ds.h[i].size(), nodes);
    require_size("t" + tag, ds.t[i].size(), nodes);
  }

  for (size_t k = 0; k < nodes; ++k) {
    const NodeIndex node = ds.chart.node(static_cast<int>(k));
    require_shape("g", ds.g[k], n, n, node);
    if ((ds.g[k] - ds.g[k].transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_of(ds.g[k]))
      throw ValidationError("g", "g at node " + node_text(node) + " is not symmetric", node);
    if (Eigen::LLT<Matrix>(ds.g[k]).info() != Eigen::Success)
      throw ValidationError("g", "g at node " + node_text(node) + " is not positive definite", node);
    if (static_cast<int>(ds.B[k].size()) != d)
      throw ValidationError("B", "B at node " + node_text(node) + " must have bundle_rank components", node);
    for (int a = 0; a < d; ++a) {
      require_shape("B", ds.B[k][a], n, n, node);
      if ((ds.B[k][a] - ds.B[k][a].transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_of(ds.B[k][a]))
        throw ValidationError("B", "B at node " + node_text(node) + " is not symmetric", node);
    }
    for (int dir = 0; dir < 2; ++dir) {
      const std::string name = dir == 0 ? "e_connection_u" : "e_connection_v";
      const Matrix& w = ds.connection(dir, static_cast<int>(k));
      require_shape(name, w, d, d, node);
      if (d > 0 && (w + w.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_of(w))
        throw ValidationError(name, name + " at node " + node_text(node) + " is not skew", node);
    }
    for (int i = 0; i < m; ++i) {
      const std::string tag = "_" + std::to_string(i + 1);
      require_shape("f" + tag, ds.f[i][k], n, n, node);
      require_shape("h" + tag, ds.h[i][k], d, n, node);
      require_shape("t" + tag, ds.t[i][k], d, d, node);
    }
  }

  check_seam(ds, "g", [&](int k) -> const Matrix& { return ds.g[k]; });
  for (int a = 0; a < d; ++a) check_seam(ds, "B", [&](int k) -> const Matrix& { return ds.B[k][a]; });
  check_seam(ds, "e_connection_u", [&](int k) -> const Matrix& { return ds.conn_u[k]; });
  check_seam(ds, "e_connection_v", [&](int k) -> const Matrix& { return ds.conn_v[k]; });
  for (int i = 0; i < m; ++i) {
    const std::string tag = "_" + std::to_string(i + 1);
    check_seam(ds, "f" + tag, [&](int k) -> const Matrix& { return ds.f[i][k]; });
    check_seam(ds, "h" + tag, [&](int k) -> const Matrix& { return ds.h[i][k]; });
    check_seam(ds, "t" + tag, [&](int k) -> const Matrix& { return ds.t[i][k]; });
  }
}

}  // namespace mpsf
