#include "mpsf/compat.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mpsf {

namespace detail {
Matrix b_column(const std::vector<Matrix>& B, int mu) {
  const int n = B.empty() ? 0 : static_cast<int>(B[0].rows());
  Matrix out(n, B.size());
  for (size_t a = 0; a < B.size(); ++a) out.col(a) = B[a].col(mu);
  return out;
}
}  // namespace detail

namespace {

using detail::b_column;

// Per-node orthonormal-frame conversions: P = L^{-T} maps frame coordinates to
// chart coordinates.
struct Frame {
  Matrix L;
  Matrix P;
  Matrix Lt;
  double inv_area;  // 1 / sqrt(det g)

  explicit Frame(const Matrix& g) {
    L = metric_factor(g);
    Lt = L.transpose();
    P = Lt.triangularView<Eigen::Upper>().solve(Matrix::Identity(g.rows(), g.cols()));
    inv_area = 1 / L.diagonal().prod();
  }
  Matrix tangent(const Matrix& f) const { return Lt * f * P; }   // TM -> TM
  Matrix to_e(const Matrix& h) const { return h * P; }           // TM -> E
  Matrix from_e(const Matrix& s) const { return Lt * s; }        // E -> TM
};

struct Accumulators {
  std::map<std::string, ResidualAccumulator> acc;
  void add(const std::string& name, double v, NodeIndex node) { acc[name].add(v, node); }
  void finish(CompatReport& r, const std::string& name, double tol) const {
    auto it = acc.find(name);
    r.entries[name] = it == acc.end() ? ResidualAccumulator{}.finish(tol) : it->second.finish(tol);
  }
};

std::vector<Matrix> all_s(const GeometricDataset& ds, int node) {
  std::vector<Matrix> s;
  for (int i = 0; i < ds.spec.num_factors(); ++i) s.push_back(derive_adjoint_s(ds, node, i));
  return s;
}

// Combine the two chart-direction residuals into residuals along the frame
// directions e_k = sum_j P(j, k) d_j, and return the largest spectral norm.
template <typename Convert>
double directional_norm(const std::array<Matrix, 2>& r, const Frame& fr, Convert convert) {
  double best = 0;
  for (int k = 0; k < 2; ++k) {
    const Matrix rk = fr.P(0, k) * r[0] + fr.P(1, k) * r[1];
    best = std::max(best, spectral_norm(convert(rk)));
  }
  return best;
}

}  // namespace

std::vector<int> projection_ranks(const GeometricDataset& ds, int node, double rel_tol) {
  const Frame fr(ds.g[node]);
  std::vector<int> out;
  for (int i = 0; i < ds.spec.num_factors(); ++i) {
    const OperatorQuadruple q = operator_quadruple(ds, node, i);
    const OperatorQuadruple hat{fr.tangent(q.f), fr.to_e(q.h), fr.from_e(q.s), q.t};
    out.push_back(numerical_rank(hat.block(), rel_tol));
  }
  return out;
}

CompatReport check_algebraic(const GeometricDataset& ds, const ToleranceProfile& profile) {
  const int m = ds.spec.num_factors(), n = ds.base_dim, d = ds.bundle_rank;
  Accumulators acc;
  for (int k = 0; k < ds.num_nodes(); ++k) {
    const NodeIndex node = ds.chart.node(k);
    const Frame fr(ds.g[k]);
    const auto s = all_s(ds, k);
    std::vector<Matrix> F, H, S, T;
    for (int i = 0; i < m; ++i) {
      F.push_back(fr.tangent(ds.f[i][k]));
      H.push_back(fr.to_e(ds.h[i][k]));
      S.push_back(fr.from_e(s[i]));
      T.push_back(ds.t[i][k]);
    }
    double f_sym = 0, t_sym = 0;
    Matrix sf = -Matrix::Identity(n, n), st = -Matrix::Identity(d, d), ss = Matrix::Zero(n, d), sh = Matrix::Zero(d, n);
    for (int i = 0; i < m; ++i) {
      f_sym = std::max(f_sym, spectral_norm(F[i] - F[i].transpose()));
      t_sym = std::max(t_sym, spectral_norm(T[i] - T[i].transpose()));
      sf += F[i];
      st += T[i];
      ss += S[i];
      sh += H[i];
    }
    acc.add("f_symmetry", f_sym, node);
    acc.add("t_symmetry", t_sym, node);
    acc.add("sum_f", spectral_norm(sf), node);
    acc.add("sum_t", spectral_norm(st), node);
    acc.add("sum_s", spectral_norm(ss), node);
    acc.add("sum_h", spectral_norm(sh), node);

    double p11 = 0, p12 = 0, p13 = 0, p14 = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double delta = i == j ? 1 : 0;
        p11 = std::max(p11, spectral_norm(F[i] * F[j] + S[i] * H[j] - delta * F[i]));
        p12 = std::max(p12, spectral_norm(T[i] * T[j] + H[i] * S[j] - delta * T[i]));
        p13 = std::max(p13, spectral_norm(F[i] * S[j] + S[i] * T[j] - delta * S[i]));
        p14 = std::max(p14, spectral_norm(H[i] * F[j] + T[i] * H[j] - delta * H[i]));
      }
    acc.add("product_fh", p11, node);
    acc.add("product_th", p12, node);
    acc.add("product_fs", p13, node);
    acc.add("product_hf", p14, node);

    double rank_gap = 0;
    for (int i = 0; i < m; ++i) {
      Matrix pi(n + d, n + d);
      pi << F[i], S[i], H[i], T[i];
      rank_gap = std::max(rank_gap, std::abs(numerical_rank(pi, profile.rank_relative) - ds.spec.factor(i).dim * 1.0));
    }
    acc.add("rank", rank_gap, node);
  }
  CompatReport r;
  for (const char* name : {"f_symmetry", "t_symmetry", "sum_f", "sum_t", "sum_s", "sum_h", "product_fh", "product_th",
                           "product_fs", "product_hf"})
    acc.finish(r, name, profile.algebraic);
  acc.finish(r, "rank", 0);
  return r;
}

CompatReport check_differential(const GeometricDataset& ds, const ToleranceProfile& profile) {
  const Chart& c = ds.chart;
  const auto gamma = christoffel_field(c, ds.g);
  Accumulators acc;
  for (int i = 0; i < ds.spec.num_factors(); ++i) {
    for (int iv = 0; iv < c.nv; ++iv)
      for (int iu = 0; iu < c.nu; ++iu) {
        const int k = c.index(iu, iv);
        const NodeIndex node{iu, iv};
        const Frame fr(ds.g[k]);
        const Matrix& F = ds.f[i][k];
        const Matrix& H = ds.h[i][k];
        const Matrix& T = ds.t[i][k];
        const Matrix S = derive_adjoint_s(ds.g[k], H);
        const Matrix ginv = ds.g[k].inverse();
        std::array<Matrix, 2> r1, r2, r3, r4;
        for (int mu = 0; mu < 2; ++mu) {
          const Matrix& G = gamma[k][mu];
          const Matrix& W = ds.connection(mu, k);
          const Matrix Bm = b_column(ds.B[k], mu);
          const Matrix nf = fd::diff(ds.f[i], c, iu, iv, mu) + G * F - F * G;
          const Matrix nh = fd::diff(ds.h[i], c, iu, iv, mu) + W * H - H * G;
          const Matrix nt = fd::diff(ds.t[i], c, iu, iv, mu) + W * T - T * W;
          const Matrix ns = ginv * nh.transpose();
          r1[mu] = nf - ginv * Bm * H - S * Bm.transpose();
          r2[mu] = nh - T * Bm.transpose() + Bm.transpose() * F;
          r3[mu] = nt + Bm.transpose() * S + H * ginv * Bm;
          r4[mu] = ns + F * ginv * Bm - ginv * Bm * T;
        }
        acc.add("parallel_f", directional_norm(r1, fr, [&](const Matrix& x) { return fr.tangent(x); }), node);
        acc.add("parallel_h", directional_norm(r2, fr, [&](const Matrix& x) { return fr.to_e(x); }), node);
        acc.add("parallel_t", directional_norm(r3, fr, [&](const Matrix& x) { return x; }), node);
        acc.add("parallel_s", directional_norm(r4, fr, [&](const Matrix& x) { return fr.from_e(x); }), node);
      }
  }
  CompatReport r;
  for (const char* name : {"parallel_f", "parallel_h", "parallel_t", "parallel_s"})
    acc.finish(r, name, profile.differential);
  return r;
}

namespace {

Matrix gauss_rhs(const GeometricDataset& ds, int k) {
  const Matrix& g = ds.g[k];
  const int n = ds.base_dim;
  Matrix rhs = Matrix::Zero(n, n);
  for (int i = 0; i < ds.spec.num_factors(); ++i) {
    const double ci = ds.spec.factor(i).curvature;
    if (ci == 0) continue;
    const Vector a = ds.f[i][k].col(0), b = ds.f[i][k].col(1);
    rhs += ci * (a * (g * b).transpose() - b * (g * a).transpose());
  }
  Matrix bb = Matrix::Zero(n, n);
  for (const Matrix& Ba : ds.B[k]) bb += Ba.col(0) * Ba.col(1).transpose() - Ba.col(1) * Ba.col(0).transpose();
  return rhs + g.llt().solve(bb);
}

// <M(e1, e2) e2, e1> for an operator M = M(d_u, d_v).
double sectional(const Matrix& m, const Matrix& g) {
  const Frame fr(g);
  return fr.inv_area * (fr.P.transpose() * g * m * fr.P)(0, 1);
}

}  // namespace

std::vector<double> extrinsic_gauss_curvature(const GeometricDataset& ds) {
  std::vector<double> out(ds.num_nodes());
  for (int k = 0; k < ds.num_nodes(); ++k) out[k] = sectional(gauss_rhs(ds, k), ds.g[k]);
  return out;
}

std::vector<double> intrinsic_gauss_curvature(const GeometricDataset& ds) {
  const Chart& c = ds.chart;
  const auto gamma = christoffel_field(c, ds.g);
  std::vector<Matrix> gu(gamma.size()), gv(gamma.size());
  for (size_t k = 0; k < gamma.size(); ++k) {
    gu[k] = gamma[k][0];
    gv[k] = gamma[k][1];
  }
  std::vector<double> out(ds.num_nodes(), std::numeric_limits<double>::quiet_NaN());
  for (int iv = 0; iv < c.nv; ++iv)
    for (int iu = 0; iu < c.nu; ++iu) {
      if (!c.interior(iu, iv, 2)) continue;
      const int k = c.index(iu, iv);
      const Matrix r = fd::diff(gv, c, iu, iv, 0) - fd::diff(gu, c, iu, iv, 1) + gu[k] * gv[k] - gv[k] * gu[k];
      out[k] = sectional(r, ds.g[k]);
    }
  return out;
}

CompatReport check_curvature_equations(const GeometricDataset& ds, const ToleranceProfile& profile) {
  const Chart& c = ds.chart;
  const int d = ds.bundle_rank, m = ds.spec.num_factors();
  const auto gamma = christoffel_field(c, ds.g);
  std::vector<Matrix> gu(gamma.size()), gv(gamma.size());
  for (size_t k = 0; k < gamma.size(); ++k) {
    gu[k] = gamma[k][0];
    gv[k] = gamma[k][1];
  }
  // B^a as fields for differencing.
  std::vector<std::vector<Matrix>> b_field(d, std::vector<Matrix>(ds.num_nodes()));
  for (int k = 0; k < ds.num_nodes(); ++k)
    for (int a = 0; a < d; ++a) b_field[a][k] = ds.B[k][a];

  Accumulators acc;
  for (int iv = 0; iv < c.nv; ++iv)
    for (int iu = 0; iu < c.nu; ++iu) {
      if (!c.interior(iu, iv, 2)) continue;
      const int k = c.index(iu, iv);
      const NodeIndex node{iu, iv};
      const Matrix& g = ds.g[k];
      const Frame fr(g);

      const Matrix riem = fd::diff(gv, c, iu, iv, 0) - fd::diff(gu, c, iu, iv, 1) + gu[k] * gv[k] - gv[k] * gu[k];
      acc.add("gauss", std::abs(sectional(riem - gauss_rhs(ds, k), g)), node);

      if (d == 0) continue;
      // Codazzi: rows a of (nabla_u B^a)(d_v, .) - (nabla_v B^a)(d_u, .).
      std::array<std::vector<Matrix>, 2> nb;
      for (int mu = 0; mu < 2; ++mu) {
        const Matrix& W = ds.connection(mu, k);
        for (int a = 0; a < d; ++a) {
          Matrix x = fd::diff(b_field[a], c, iu, iv, mu) - gamma[k][mu].transpose() * ds.B[k][a] -
                     ds.B[k][a] * gamma[k][mu];
          for (int e = 0; e < d; ++e) x += W(a, e) * ds.B[k][e];
          nb[mu].push_back(x);
        }
      }
      Matrix cod(d, 2);
      for (int a = 0; a < d; ++a) cod.row(a) = nb[0][a].row(1) - nb[1][a].row(0);
      Matrix ric = fd::diff(ds.conn_v, c, iu, iv, 0) - fd::diff(ds.conn_u, c, iu, iv, 1) +
                   ds.conn_u[k] * ds.conn_v[k] - ds.conn_v[k] * ds.conn_u[k];
      for (int i = 0; i < m; ++i) {
        const double ci = ds.spec.factor(i).curvature;
        if (ci == 0) continue;
        const Matrix& F = ds.f[i][k];
        const Matrix& H = ds.h[i][k];
        cod -= ci * (H.col(0) * (g * F.col(1)).transpose() - H.col(1) * (g * F.col(0)).transpose());
        ric -= ci * (H.col(0) * H.col(1).transpose() - H.col(1) * H.col(0).transpose());
      }
      const Matrix ginv = g.inverse();
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          ric(a, b) -= (ds.B[k][a].col(0).transpose() * ginv * ds.B[k][b].col(1))(0) -
                       (ds.B[k][a].col(1).transpose() * ginv * ds.B[k][b].col(0))(0);
      acc.add("codazzi", fr.inv_area * spectral_norm(cod * fr.P), node);
      acc.add("ricci", fr.inv_area * spectral_norm(ric), node);
    }
  CompatReport r;
  acc.finish(r, "gauss", profile.curvature);
  acc.finish(r, "codazzi", profile.curvature);
  acc.finish(r, "ricci", profile.curvature);
  return r;
}

CompatReport compatibility_verdict(const GeometricDataset& ds, const ToleranceProfile& profile) {
  CompatReport r = check_algebraic(ds, profile);
  r.merge(check_differential(ds, profile));
  r.merge(check_curvature_equations(ds, profile));
  return r;
}

}  // namespace mpsf
