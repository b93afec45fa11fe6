#include "mpsf/s2xs2.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "mpsf/compat.hpp"
#include "mpsf/errors.hpp"

namespace mpsf {

namespace {

using detail::b_column;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::Vector3d cross_block(const AmbientPoint& x, const AmbientVector& v, int o) {
  return Eigen::Vector3d(x.segment<3>(o)).cross(Eigen::Vector3d(v.segment<3>(o)));
}

// Orthonormal-frame conversions at a node; P = L^{-T} sends frame to chart
// coordinates.
struct Frame {
  Matrix Lt;
  Matrix P;
  explicit Frame(const Matrix& g) {
    Lt = metric_factor(g).transpose();
    P = Lt.triangularView<Eigen::Upper>().solve(Matrix::Identity(2, 2));
  }
};

std::vector<Matrix> hat_second_form(const GeometricDataset& ds, int node, const Frame& fr) {
  std::vector<Matrix> out;
  for (const Matrix& b : ds.B[node]) out.push_back(fr.P.transpose() * b * fr.P);
  return out;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

void require_s2xs2(const MultiproductSpec& spec) {
  const bool ok = spec.num_factors() == 2 && spec.factor(0).dim == 2 && spec.factor(1).dim == 2 &&
                  spec.factor(0).curvature == 1 && spec.factor(1).curvature == 1;
  if (!ok) throw std::invalid_argument("complex structures need the ambient S^2 x S^2 with unit spheres");
}

AmbientVector apply_complex_structure(int which, const AmbientPoint& x, const AmbientVector& v) {
  AmbientVector out(6);
  out.head<3>() = cross_block(x, v, 0);
  out.tail<3>() = (which == 0 ? 1.0 : -1.0) * cross_block(x, v, 3);
  return out;
}

ComplexDecomposition decompose_complex(const MultiproductSpec& spec, const std::vector<AmbientPoint>& points,
                                       const std::vector<std::array<AmbientVector, 2>>& tangent,
                                       const std::vector<std::array<AmbientVector, 2>>& normal) {
  require_s2xs2(spec);
  if (tangent.size() != points.size() || normal.size() != points.size())
    throw std::invalid_argument("frame fields and points differ in length");
  ComplexDecomposition cd;
  cd.nodes.resize(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    for (int which = 0; which < 2; ++which) {
      ComplexBlocks& b = cd.nodes[p][which];
      b.j.resize(2, 2);
      b.k.resize(2, 2);
      b.l.resize(2, 2);
      b.m.resize(2, 2);
      for (int c = 0; c < 2; ++c) {
        const AmbientVector je = apply_complex_structure(which, points[p], tangent[p][c]);
        const AmbientVector jn = apply_complex_structure(which, points[p], normal[p][c]);
        for (int r = 0; r < 2; ++r) {
          b.j(r, c) = tangent[p][r].dot(je);
          b.k(r, c) = normal[p][r].dot(je);
          b.l(r, c) = tangent[p][r].dot(jn);
          b.m(r, c) = normal[p][r].dot(jn);
        }
      }
    }
  }
  return cd;
}

ComplexDecomposition decompose_complex(const ImmersionField& im, const GeometricDataset& ds) {
  require_s2xs2(ds.spec);
  if (ds.bundle_rank != 2 || ds.base_dim != 2) throw std::invalid_argument("expected a surface with rank-2 normal bundle");
  const int nodes = ds.num_nodes();
  std::vector<std::array<AmbientVector, 2>> tangent(nodes), normal(nodes);
  for (int p = 0; p < nodes; ++p) {
    const Frame fr(ds.g[p]);
    for (int c = 0; c < 2; ++c) {
      tangent[p][c] = fr.P(0, c) * im.push[0][p] + fr.P(1, c) * im.push[1][p];
      normal[p][c] = im.normals[p][c];
    }
  }
  return decompose_complex(ds.spec, im.points, tangent, normal);
}

ComplexDecomposition change_frames(const ComplexDecomposition& cd, const std::vector<Matrix>& qt,
                                   const std::vector<Matrix>& qn) {
  ComplexDecomposition out = cd;
  for (int p = 0; p < cd.num_nodes(); ++p)
    for (ComplexBlocks& b : out.nodes[p]) {
      b.j = qt[p].transpose() * b.j * qt[p];
      b.k = qn[p].transpose() * b.k * qt[p];
      b.l = qt[p].transpose() * b.l * qn[p];
      b.m = qn[p].transpose() * b.m * qn[p];
    }
  return out;
}

std::array<OperatorQuadruple, 2> to_projection_operators(const std::array<ComplexBlocks, 2>& node) {
  const ComplexBlocks& a = node[0];
  const ComplexBlocks& b = node[1];
  // Blocks of J1 J2.
  const Matrix tt = a.j * b.j + a.l * b.k;
  const Matrix nt = a.k * b.j + a.m * b.k;
  const Matrix tn = a.j * b.l + a.l * b.m;
  const Matrix nn = a.k * b.l + a.m * b.m;
  const Matrix it = Matrix::Identity(tt.rows(), tt.cols());
  const Matrix in = Matrix::Identity(nn.rows(), nn.cols());
  std::array<OperatorQuadruple, 2> out;
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? -1.0 : 1.0;
    out[i] = {0.5 * (it + sign * tt), 0.5 * sign * nt, 0.5 * sign * tn, 0.5 * (in + sign * nn)};
  }
  return out;
}

GeometricDataset dictionary_dataset(const ComplexDecomposition& cd, const GeometricDataset& ds) {
  require_s2xs2(ds.spec);
  if (cd.num_nodes() != ds.num_nodes()) throw std::invalid_argument("decomposition and dataset differ in node count");
  GeometricDataset out = ds;
  for (int p = 0; p < ds.num_nodes(); ++p) {
    const Frame fr(ds.g[p]);
    const auto ops = to_projection_operators(cd.nodes[p]);
    for (int i = 0; i < 2; ++i) {
      out.f[i][p] = fr.P * ops[i].f * fr.Lt;
      out.h[i][p] = ops[i].h * fr.Lt;
      out.t[i][p] = ops[i].t;
    }
  }
  return out;
}

CompatReport check_complex_relations(const ComplexDecomposition& cd, const GeometricDataset& ds,
                                     const ToleranceProfile& profile) {
  require_s2xs2(ds.spec);
  if (cd.num_nodes() != ds.num_nodes()) throw std::invalid_argument("decomposition and dataset differ in node count");
  const Chart& c = ds.chart;
  const int nodes = ds.num_nodes();
  std::map<std::string, ResidualAccumulator> acc;
  const Matrix i2 = Matrix::Identity(2, 2);

  for (int p = 0; p < nodes; ++p) {
    const NodeIndex node = c.node(p);
    const auto& [a, b] = cd.nodes[p];
    double skew_j = 0, skew_m = 0, adj = 0, sq[4] = {0, 0, 0, 0};
    for (const ComplexBlocks* x : {&a, &b}) {
      skew_j = std::max(skew_j, max_abs(x->j + x->j.transpose()));
      skew_m = std::max(skew_m, max_abs(x->m + x->m.transpose()));
      adj = std::max(adj, max_abs(x->k + x->l.transpose()));
      sq[0] = std::max(sq[0], spectral_norm(x->j * x->j + x->l * x->k + i2));
      sq[1] = std::max(sq[1], spectral_norm(x->k * x->j + x->m * x->k));
      sq[2] = std::max(sq[2], spectral_norm(x->j * x->l + x->l * x->m));
      sq[3] = std::max(sq[3], spectral_norm(x->k * x->l + x->m * x->m + i2));
    }
    acc["antisymmetry_j"].add(skew_j, node);
    acc["antisymmetry_m"].add(skew_m, node);
    acc["adjoint_kl"].add(adj, node);
    acc["square_tt"].add(sq[0], node);
    acc["square_nt"].add(sq[1], node);
    acc["square_tn"].add(sq[2], node);
    acc["square_nn"].add(sq[3], node);
    acc["commute_tt"].add(spectral_norm(a.j * b.j + a.l * b.k - b.j * a.j - b.l * a.k), node);
    acc["commute_nt"].add(spectral_norm(a.k * b.j + a.m * b.k - b.k * a.j - b.m * a.k), node);
    acc["commute_tn"].add(spectral_norm(a.j * b.l + a.l * b.m - b.j * a.l - b.l * a.m), node);
    acc["commute_nn"].add(spectral_norm(a.k * b.l + a.m * b.m - b.k * a.l - b.m * a.m), node);
  }

  // Derivative relations, in chart coordinates:
  //   (nabla_X j) Y = A_{kY} X + l B(X, Y)
  //   (nabla_X k) Y = m B(X, Y) - B(X, jY)
  //   (nabla_X m) xi = -B(l xi, X) - k A_xi X
  //   (nabla_X l) xi = -j A_xi X + A_{m xi} X
  const auto gamma = christoffel_field(c, ds.g);
  std::vector<Frame> frames;
  frames.reserve(nodes);
  for (int p = 0; p < nodes; ++p) frames.emplace_back(ds.g[p]);
  for (int which = 0; which < 2; ++which) {
    std::vector<Matrix> j(nodes), k(nodes), l(nodes), m(nodes);
    for (int p = 0; p < nodes; ++p) {
      const ComplexBlocks& x = cd.nodes[p][which];
      j[p] = frames[p].P * x.j * frames[p].Lt;
      k[p] = x.k * frames[p].Lt;
      l[p] = frames[p].P * x.l;
      m[p] = x.m;
    }
    for (int iv = 0; iv < c.nv; ++iv)
      for (int iu = 0; iu < c.nu; ++iu) {
        const int p = c.index(iu, iv);
        const Frame& fr = frames[p];
        const Eigen::LLT<Matrix> g(ds.g[p]);
        std::array<Matrix, 2> rj, rk, rm, rl;
        for (int mu = 0; mu < 2; ++mu) {
          const Matrix& G = gamma[p][mu];
          const Matrix& W = ds.connection(mu, p);
          const Matrix bc = b_column(ds.B[p], mu);  // columns B^a e_mu
          const Matrix ab = g.solve(bc);            // A_xi e_mu = ab * xi
          rj[mu] = fd::diff(j, c, iu, iv, mu) + G * j[p] - j[p] * G - ab * k[p] - l[p] * bc.transpose();
          rk[mu] = fd::diff(k, c, iu, iv, mu) + W * k[p] - k[p] * G - m[p] * bc.transpose() + bc.transpose() * j[p];
          rm[mu] = fd::diff(m, c, iu, iv, mu) + W * m[p] - m[p] * W + bc.transpose() * l[p] + k[p] * ab;
          rl[mu] = fd::diff(l, c, iu, iv, mu) + G * l[p] - l[p] * W + j[p] * ab - ab * m[p];
        }
        auto directional = [&](const std::array<Matrix, 2>& r, bool tangent_out, bool tangent_in) {
          double best = 0;
          for (int e = 0; e < 2; ++e) {
            Matrix re = fr.P(0, e) * r[0] + fr.P(1, e) * r[1];
            if (tangent_out) re = fr.Lt * re;
            if (tangent_in) re = re * fr.P;
            best = std::max(best, spectral_norm(re));
          }
          return best;
        };
        const NodeIndex node{iu, iv};
        acc["parallel_j" + std::to_string(which)].add(directional(rj, true, true), node);
        acc["parallel_k" + std::to_string(which)].add(directional(rk, false, true), node);
        acc["parallel_m" + std::to_string(which)].add(directional(rm, false, false), node);
        acc["parallel_l" + std::to_string(which)].add(directional(rl, true, false), node);
      }
  }

  CompatReport report;
  for (const char* name : {"antisymmetry_j", "antisymmetry_m", "adjoint_kl", "square_tt", "square_nt", "square_tn",
                           "square_nn", "commute_tt", "commute_nt", "commute_tn", "commute_nn"})
    report.entries[name] = acc[name].finish(profile.algebraic);
  for (const char* name : {"parallel_j", "parallel_k", "parallel_m", "parallel_l"}) {
    const ResidualStat s0 = acc[std::string(name) + "0"].finish(profile.differential);
    const ResidualStat s1 = acc[std::string(name) + "1"].finish(profile.differential);
    ResidualStat s = (s1.max > s0.max || std::isnan(s1.max)) ? s1 : s0;
    s.mean = 0.5 * (s0.mean + s1.mean);
    report.entries[name] = s;
  }
  return report;
}

S2S2Curvature gauss_curvature_s2s2(const ComplexDecomposition& cd, const GeometricDataset& ds,
                                   const ToleranceProfile& profile) {
  require_s2xs2(ds.spec);
  if (cd.num_nodes() != ds.num_nodes()) throw std::invalid_argument("decomposition and dataset differ in node count");
  const Chart& c = ds.chart;
  const int nodes = ds.num_nodes();
  S2S2Curvature out;
  out.k_general.resize(nodes);
  out.k_printed.resize(nodes);
  out.normal_measured.assign(nodes, kNaN);
  out.normal_predicted.resize(nodes);
  out.normal_printed.resize(nodes);

  for (int p = 0; p < nodes; ++p) {
    const Frame fr(ds.g[p]);
    const auto& [a, b] = cd.nodes[p];
    const std::vector<Matrix> bh = hat_second_form(ds, p, fr);
    const auto ops = to_projection_operators(cd.nodes[p]);

    // General Gauss equation, both factors of curvature 1.
    double k = 0;
    for (const OperatorQuadruple& q : ops) k += q.f(1, 1) * q.f(0, 0) - q.f(0, 1) * q.f(1, 0);
    Vector mean = Vector::Zero(2);
    double b2 = 0, ext = 0;
    for (size_t al = 0; al < bh.size(); ++al) {
      k += bh[al](0, 0) * bh[al](1, 1) - bh[al](0, 1) * bh[al](0, 1);
      mean(al) = 0.5 * bh[al].trace();
      b2 += bh[al].squaredNorm();
    }
    out.k_general[p] = k;

    // The complex display as printed, e_r = r-th column of the frame.
    auto jj = [&](int r, int s) { return a.j.col(r).dot(b.j.col(s)); };
    auto kk = [&](int r, int s) { return a.k.col(r).dot(b.k.col(s)); };
    out.k_printed[p] = 0.5 * (1 + (jj(0, 1) + kk(0, 1)) * (jj(1, 0) + kk(1, 0)) -
                              (jj(0, 0) + kk(0, 0)) * (jj(1, 1) - kk(1, 1))) +
                       2 * mean.squaredNorm() - 0.5 * b2;

    const Matrix hh = a.k * b.j + a.m * b.k;  // hh(al, r) = <H e_r, nu_al>
    const double bracket = hh(0, 1) * hh(1, 0) - hh(0, 0) * hh(1, 1);
    ext = (bh[0] * bh[1] - bh[1] * bh[0])(1, 0);
    out.normal_predicted[p] = 0.5 * bracket + ext;
    out.normal_printed[p] = bracket - ext;
  }

  // Normal curvature from the connection, on nodes where nested differences
  // stay second order.
  ResidualAccumulator ricci;
  for (int iv = 0; iv < c.nv; ++iv)
    for (int iu = 0; iu < c.nu; ++iu) {
      if (!c.interior(iu, iv, 2)) continue;
      const int p = c.index(iu, iv);
      const Matrix r = fd::diff(ds.conn_v, c, iu, iv, 0) - fd::diff(ds.conn_u, c, iu, iv, 1) +
                       ds.conn_u[p] * ds.conn_v[p] - ds.conn_v[p] * ds.conn_u[p];
      out.normal_measured[p] = r(1, 0) / std::sqrt(ds.g[p].determinant());
      ricci.add(std::abs(out.normal_measured[p] - out.normal_predicted[p]), {iu, iv});
    }
  out.ricci = ricci.finish(profile.curvature);

  // Codazzi: general check on the dictionary dataset, plus the identity
  // between its right-hand side and the complex form.
  const GeometricDataset dict = dictionary_dataset(cd, ds);
  out.codazzi = check_curvature_equations(dict, profile).at("codazzi");
  for (int p = 0; p < nodes; ++p) {
    const auto& [a, b] = cd.nodes[p];
    const auto ops = to_projection_operators(cd.nodes[p]);
    const Matrix ff = a.j * b.j + a.l * b.k;
    const Matrix hh = a.k * b.j + a.m * b.k;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z) {
          Vector general = Vector::Zero(2);
          for (const OperatorQuadruple& q : ops) general += q.f(z, y) * q.h.col(x) - q.f(z, x) * q.h.col(y);
          const Vector complex = 0.5 * (ff(y, z) * hh.col(x) - ff(x, z) * hh.col(y));
          out.codazzi_identity_gap = std::max(out.codazzi_identity_gap, (general - complex).cwiseAbs().maxCoeff());
        }
  }
  return out;
}

std::vector<std::array<double, 2>> kahler_functions(const ComplexDecomposition& cd) {
  std::vector<std::array<double, 2>> out(cd.num_nodes());
  for (int p = 0; p < cd.num_nodes(); ++p) out[p] = {cd.nodes[p][0].j(1, 0), cd.nodes[p][1].j(1, 0)};
  return out;
}

std::string SurfaceLabels::text() const {
  std::string s;
  auto add = [&](const char* label) { s += (s.empty() ? "" : ";") + std::string(label); };
  if (complex[0]) add("complex-J1");
  if (complex[1]) add("complex-J2");
  if (lagrangian[0]) add("Lagrangian-J1");
  if (lagrangian[1]) add("Lagrangian-J2");
  return s.empty() ? "generic" : s;
}

std::vector<SurfaceLabels> classify_surface(const ComplexDecomposition& cd, double tol) {
  std::vector<SurfaceLabels> out(cd.num_nodes());
  for (int p = 0; p < cd.num_nodes(); ++p)
    for (int i = 0; i < 2; ++i) {
      const ComplexBlocks& b = cd.nodes[p][i];
      out[p].complex[i] = spectral_norm(b.k) + spectral_norm(b.l) <= tol;
      out[p].lagrangian[i] = spectral_norm(b.j) + spectral_norm(b.m) <= tol;
    }
  return out;
}

}  // namespace mpsf
