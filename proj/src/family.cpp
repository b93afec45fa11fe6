#include "mpsf/family.hpp"

#include <cmath>
#include <string>

#include "mpsf/errors.hpp"

namespace mpsf {

namespace {

constexpr double kTraceTolerance = 1e-10;

Matrix quarter_turn() {
  Matrix q(2, 2);
  q << 0, -1, 1, 0;
  return q;
}

}  // namespace

Matrix complex_structure(const Matrix& g) {
  const Matrix l = metric_factor(g);
  const Matrix lt = l.transpose();
  return lt.triangularView<Eigen::Upper>().solve(quarter_turn() * lt);
}

TraceStat trace_residual(const GeometricDataset& ds) {
  TraceStat out;
  for (int k = 0; k < ds.num_nodes(); ++k) {
    const Eigen::LDLT<Matrix> g(ds.g[k]);
    for (const Matrix& b : ds.B[k]) {
      const double tr = std::abs(g.solve(b).trace());
      if (tr > out.max || std::isnan(tr)) {
        out.max = tr;
        out.node = ds.chart.node(k);
      }
    }
  }
  return out;
}

double conjugation_residual(const GeometricDataset& ds) {
  double worst = 0;
  for (int k = 0; k < ds.num_nodes(); ++k) {
    const Matrix j = complex_structure(ds.g[k]);
    for (const Matrix& b : ds.B[k]) worst = std::max(worst, (j.transpose() * b - b * j).cwiseAbs().maxCoeff());
  }
  return worst;
}

RotatedDataset rotate_dataset(const GeometricDataset& ds, double theta) {
  validate_dataset(ds);
  if (ds.base_dim != 2) throw ValidationError("base_dim", "rotated data needs a surface (n = 2)");
  const TraceStat tr = trace_residual(ds);
  if (!(tr.max <= kTraceTolerance))
    throw ValidationError("B",
                          "B is not trace-free: |tr_g B| = " + std::to_string(tr.max) + " at node (" +
                              std::to_string(tr.node.iu) + "," + std::to_string(tr.node.iv) + ")",
                          tr.node);

  RotatedDataset out{ds, theta, {}, {}};
  const int nodes = ds.num_nodes();
  out.rotation.reserve(nodes);
  out.j.reserve(nodes);
  const double c = std::cos(theta), s = std::sin(theta);
  for (int k = 0; k < nodes; ++k) {
    const Matrix j = complex_structure(ds.g[k]);
    out.j.push_back(j);
    out.rotation.push_back(c * Matrix::Identity(2, 2) + s * j);
  }
  // Angle zero returns the input untouched rather than a roundoff-level copy.
  if (theta == 0) return out;

  GeometricDataset& r = out.dataset;
  for (int k = 0; k < nodes; ++k) {
    const Matrix& rot = out.rotation[k];
    const Matrix inv = c * Matrix::Identity(2, 2) - s * out.j[k];
    for (Matrix& b : r.B[k]) {
      const Matrix m = inv.transpose() * b;
      b = 0.5 * (m + m.transpose());
    }
    for (int i = 0; i < r.spec.num_factors(); ++i) {
      r.f[i][k] = rot * r.f[i][k] * inv;
      r.h[i][k] = r.h[i][k] * inv;
    }
  }
  return out;
}

std::vector<FamilyMember> generate_family(const GeometricDataset& ds, const std::vector<double>& thetas,
                                          NodeIndex base, const ToleranceProfile& profile) {
  if (thetas.empty()) throw std::invalid_argument("the angle list is empty");
  const int b = ds.chart.index(base.iu, base.iv);
  const Matrix seed = eigenbundle_seed(ds, b);
  const Matrix l = metric_factor(ds.g[b]);

  std::vector<FamilyMember> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    const RotatedDataset rd = rotate_dataset(ds, theta);
    // R in the orthonormal tangent frame is the plain rotation by theta.
    Matrix psi = Matrix::Identity(seed.rows(), seed.rows());
    psi.topLeftCorner(2, 2) = l.transpose() * rd.rotation[b] * l.transpose().inverse();
    const ParallelFrame frame = build_parallel_frame(rd.dataset, base, psi * seed);
    FamilyMember m{theta, synthesize_immersion(frame, rd.dataset), {}, trace_residual(rd.dataset).max};
    m.verification = verify_immersion(m.immersion, rd.dataset, profile);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace mpsf
