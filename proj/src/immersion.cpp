#include "mpsf/immersion.hpp"

#include <cmath>

#include "mpsf/compat.hpp"

namespace mpsf {

namespace {

// Flat factor coordinates by trapezoid integration of dx = push along the
// row-first (or column-first) sweep from the base node.
std::vector<Vector> integrate_flat(const ImmersionField& im, int offset, int width, NodeIndex base, bool rows_first) {
  const Chart& c = im.chart;
  std::vector<Vector> x(c.num_nodes());
  auto line = [&](int dir, int fixed, int start) {
    const double h = c.spacing(dir);
    auto idx = [&](int j) { return dir == 0 ? c.index(j, fixed) : c.index(fixed, j); };
    auto slope = [&](int j) { return im.push[dir][idx(j)].segment(offset, width); };
    for (int j = start; j + 1 < c.size(dir); ++j) x[idx(j + 1)] = x[idx(j)] + (h / 2) * (slope(j) + slope(j + 1));
    for (int j = start; j - 1 >= 0; --j) x[idx(j - 1)] = x[idx(j)] - (h / 2) * (slope(j) + slope(j - 1));
  };
  x[c.index(base.iu, base.iv)] = Vector::Zero(width);
  if (rows_first) {
    line(0, base.iv, base.iu);
    for (int iu = 0; iu < c.nu; ++iu) line(1, iu, base.iv);
  } else {
    line(1, base.iu, base.iv);
    for (int iv = 0; iv < c.nv; ++iv) line(0, iv, base.iu);
  }
  return x;
}

}  // namespace

ImmersionField synthesize_immersion(const ParallelFrame& frame, const GeometricDataset& ds) {
  ImmersionField im;
  im.spec = ds.spec;
  im.chart = ds.chart;
  const int nodes = ds.num_nodes(), n = ds.base_dim, d = ds.bundle_rank;
  const int dim = ds.spec.ambient_dim();
  im.points.assign(nodes, AmbientPoint::Zero(dim));
  im.push[0].resize(nodes);
  im.push[1].resize(nodes);
  im.normals.assign(nodes, std::vector<AmbientVector>(d));

  for (int k = 0; k < nodes; ++k) {
    const Matrix& s = frame.sections[k];
    // Phi(V) = Sigma^T G~ V.
    const Matrix phi = s.transpose() * bundle_gram(ds, k);
    for (int mu = 0; mu < n; ++mu) im.push[mu][k] = phi.col(mu);
    for (int a = 0; a < d; ++a) im.normals[k][a] = phi.col(n + a);
    for (int i = 0; i < ds.spec.num_factors(); ++i) {
      const int x = frame.bundle.xi_slot(i);
      if (x < 0) continue;
      const double c = ds.spec.factor(i).curvature;
      const double scale = (c > 0 ? 1 : -1) / std::sqrt(std::abs(c));
      const int o = ds.spec.ambient_offset(i), w = ds.spec.ambient_dim(i);
      im.points[k].segment(o, w) = scale * s.row(x).segment(frame.column_offset[i], w).transpose();
    }
  }
  for (int i = 0; i < ds.spec.num_factors(); ++i) {
    if (ds.spec.curved(i)) continue;
    const int o = ds.spec.ambient_offset(i), w = ds.spec.ambient_dim(i);
    const auto rows = integrate_flat(im, o, w, frame.base, true);
    const auto cols = integrate_flat(im, o, w, frame.base, false);
    for (int k = 0; k < nodes; ++k) {
      im.points[k].segment(o, w) = rows[k];
      im.flat_closure = std::max(im.flat_closure, (rows[k] - cols[k]).norm());
    }
  }
  return im;
}

namespace {

struct NodeFrame {
  Matrix P;  // chart components of an orthonormal tangent frame
  explicit NodeFrame(const Matrix& g) {
    const Matrix Lt = metric_factor(g).transpose();
    P = Lt.triangularView<Eigen::Upper>().solve(Matrix::Identity(g.rows(), g.cols()));
  }
};

}  // namespace

double min_pushforward_singular_value(const ImmersionField& im, const GeometricDataset& ds) {
  double best = INFINITY;
  for (int k = 0; k < ds.num_nodes(); ++k) {
    const NodeFrame fr(ds.g[k]);
    Matrix cols(im.spec.ambient_dim(), 2);
    cols.col(0) = im.push[0][k];
    cols.col(1) = im.push[1][k];
    const Matrix e = cols * fr.P;
    Eigen::JacobiSVD<Matrix> svd(e);
    best = std::min(best, svd.singularValues()(svd.singularValues().size() - 1));
  }
  return best;
}

CompatReport verify_immersion(const ImmersionField& im, const GeometricDataset& ds, const ToleranceProfile& profile) {
  const Chart& c = ds.chart;
  const MultiproductSpec& spec = ds.spec;
  const int d = ds.bundle_rank, m = spec.num_factors();
  const std::array<std::vector<Vector>, 2> dx = {fd::diff_field(im.points, c, 0), fd::diff_field(im.points, c, 1)};
  const std::vector<Vector> dxuv = fd::diff_field(dx[0], c, 1);
  std::array<std::vector<std::vector<Vector>>, 2> dn;
  for (int mu = 0; mu < 2; ++mu) {
    dn[mu].assign(ds.num_nodes(), std::vector<Vector>(d));
    for (int a = 0; a < d; ++a) {
      std::vector<Vector> field(ds.num_nodes());
      for (int k = 0; k < ds.num_nodes(); ++k) field[k] = im.normals[k][a];
      const auto df = fd::diff_field(field, c, mu);
      for (int k = 0; k < ds.num_nodes(); ++k) dn[mu][k][a] = df[k];
    }
  }
  auto inner = [&](const Vector& a, const Vector& b) { return ambient_inner(spec, a, b); };

  std::map<std::string, ResidualAccumulator> acc;
  for (int iv = 0; iv < c.nv; ++iv)
    for (int iu = 0; iu < c.nu; ++iu) {
      const int k = c.index(iu, iv);
      const NodeIndex node{iu, iv};
      const Matrix& g = ds.g[k];
      const NodeFrame fr(g);
      const auto& N = im.normals[k];

      Matrix gx(2, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) gx(a, b) = inner(dx[a][k], dx[b][k]);
      acc["isometry"].add(spectral_norm(fr.P.transpose() * (gx - g) * fr.P), node);

      // Gram of the synthesized frame {phi_* d_mu, Phi(nu_a)} against g + I.
      std::vector<Vector> frame_vecs = {im.push[0][k], im.push[1][k]};
      for (int a = 0; a < d; ++a) frame_vecs.push_back(N[a]);
      Matrix gram(2 + d, 2 + d), target = Matrix::Identity(2 + d, 2 + d);
      target.topLeftCorner(2, 2) = g;
      for (int a = 0; a < 2 + d; ++a)
        for (int b = 0; b < 2 + d; ++b) gram(a, b) = inner(frame_vecs[a], frame_vecs[b]);
      Matrix q = Matrix::Identity(2 + d, 2 + d);
      q.topLeftCorner(2, 2) = fr.P;
      acc["frame_gram"].add(spectral_norm(q.transpose() * (gram - target) * q), node);

      double constraint = 0;
      for (double r : factor_constraint_residual(im.points[k], spec)) constraint = std::max(constraint, r);
      acc["factor_constraint"].add(constraint, node);

      auto tangent_image = [&](const Vector& xcoords) -> Vector { return xcoords(0) * dx[0][k] + xcoords(1) * dx[1][k]; };
      auto normal_image = [&](const Vector& e) -> Vector {
        Vector out = Vector::Zero(spec.ambient_dim());
        for (int a = 0; a < d; ++a) out += e(a) * N[a];
        return out;
      };
      double proj_t = 0, proj_n = 0;
      for (int i = 0; i < m; ++i) {
        const Matrix& F = ds.f[i][k];
        const Matrix& H = ds.h[i][k];
        const Matrix& T = ds.t[i][k];
        const Matrix S = derive_adjoint_s(g, H);
        for (int e = 0; e < 2; ++e) {
          const Vector X = fr.P.col(e);
          const Vector r = factor_projection(spec, i, tangent_image(X)) - tangent_image(F * X) - normal_image(H * X);
          proj_t = std::max(proj_t, r.norm());
        }
        for (int b = 0; b < d; ++b) {
          const Vector r = factor_projection(spec, i, N[b]) - tangent_image(S.col(b)) - normal_image(T.col(b));
          proj_n = std::max(proj_n, r.norm());
        }
      }
      acc["projection_tangent"].add(proj_t, node);
      acc["projection_normal"].add(proj_n, node);

      const Vector xuu = fd::diff2(im.points, c, iu, iv, 0);
      const Vector xvv = fd::diff2(im.points, c, iu, iv, 1);
      double sff = 0;
      for (int a = 0; a < d; ++a) {
        Matrix bx(2, 2);
        bx << inner(xuu, N[a]), inner(dxuv[k], N[a]), inner(dxuv[k], N[a]), inner(xvv, N[a]);
        sff = std::max(sff, spectral_norm(fr.P.transpose() * (bx - ds.B[k][a]) * fr.P));
      }
      acc["second_fundamental_form"].add(sff, node);

      double conn = 0;
      if (d > 0) {
        std::array<Matrix, 2> diff;
        for (int mu = 0; mu < 2; ++mu) {
          Matrix wx(d, d);
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) wx(a, b) = inner(dn[mu][k][b], N[a]);
          diff[mu] = wx - ds.connection(mu, k);
        }
        for (int e = 0; e < 2; ++e)
          conn = std::max(conn, spectral_norm(fr.P(0, e) * diff[0] + fr.P(1, e) * diff[1]));
      }
      acc["normal_connection"].add(conn, node);
    }
  CompatReport r;
  for (auto& [name, a] : acc) r.entries[name] = a.finish(profile.verification);
  return r;
}

NodeIndex default_base_node(const Chart& chart) { return {chart.nu / 2, chart.nv / 2}; }

IsometryAlignment align_immersions(const ImmersionField& from, const std::vector<AmbientPoint>& to) {
  AlignOptions opts;
  opts.allow_degenerate = true;
  return align_isometry(from.points, to, from.spec, opts);
}

Reconstruction reconstruct(const GeometricDataset& ds, NodeIndex base, const std::vector<AmbientPoint>* ground_truth,
                           const ToleranceProfile& profile, TransportScheme scheme) {
  Reconstruction r;
  r.frame = build_parallel_frame(ds, base, scheme);
  r.immersion = synthesize_immersion(r.frame, ds);
  r.verification = verify_immersion(r.immersion, ds, profile);
  if (ground_truth) r.alignment = align_immersions(r.immersion, *ground_truth);
  return r;
}

Reconstruction reconstruct(const GeometricDataset& ds, const std::vector<AmbientPoint>* ground_truth,
                           const ToleranceProfile& profile) {
  return reconstruct(ds, default_base_node(ds.chart), ground_truth, profile);
}

}  // namespace mpsf
