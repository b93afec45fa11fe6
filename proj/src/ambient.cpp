#include "mpsf/ambient.hpp"

#include <algorithm>
#include <unsupported/Eigen/MatrixFunctions>

namespace mpsf {

namespace {

Matrix procrustes_rotation(const Matrix& cross) {
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void require_full_rank(const Matrix& cov, int factor, const char* what, const AlignOptions& opts) {
  if (opts.allow_degenerate) return;
  if (numerical_rank(cov, 1e-10) < cov.rows())
    throw DegenerateInput("factor " + std::to_string(factor + 1) + ": " + what +
                          " point cloud is rank deficient");
}

// Generalized polar factor w.r.t. diag(eta): X <- (X + eta X^{-T} eta) / 2.
bool lorentz_polar(Matrix& x, const Vector& eta) {
  const auto e = eta.asDiagonal();
  for (int it = 0; it < 200; ++it) {
    Eigen::FullPivLU<Matrix> lu(x);
    if (!lu.isInvertible()) return false;
    Matrix next = (x + e * lu.inverse().transpose() * e) / 2;
    const double step = (next - x).norm();
    x = std::move(next);
    if (!x.allFinite()) return false;
    if (step <= 1e-15 * x.norm()) return true;
  }
  return true;
}

// Levenberg-Marquardt over Q exp(eta A), A skew, minimizing sum |Q a - b|^2.
Matrix refine_on_form_group(Matrix q, const Vector& eta, const std::vector<Vector>& a,
                            const std::vector<Vector>& b) {
  const int k = static_cast<int>(eta.size());
  const int np = k * (k - 1) / 2;
  if (np == 0) return q;
  const auto e = eta.asDiagonal();
  std::vector<Matrix> gens;
  for (int p = 0; p < k; ++p)
    for (int r = p + 1; r < k; ++r) {
      Matrix g = Matrix::Zero(k, k);
      g(p, r) = 1;
      g(r, p) = -1;
      gens.push_back(e * g);
    }
  auto cost = [&](const Matrix& m) {
    double c = 0;
    for (size_t j = 0; j < a.size(); ++j) c += (m * a[j] - b[j]).squaredNorm();
    return c;
  };
  double current = cost(q);
  double lambda = 1e-6;
  for (int it = 0; it < 100; ++it) {
    Matrix jtj = Matrix::Zero(np, np);
    Vector jtr = Vector::Zero(np);
    for (size_t j = 0; j < a.size(); ++j) {
      Matrix jac(k, np);
      for (int p = 0; p < np; ++p) jac.col(p) = q * gens[p] * a[j];
      const Vector r = q * a[j] - b[j];
      jtj.noalias() += jac.transpose() * jac;
      jtr.noalias() += jac.transpose() * r;
    }
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      Matrix damped = jtj;
      damped.diagonal().array() += lambda * (1 + jtj.diagonal().array());
      const Vector delta = -damped.ldlt().solve(jtr);
      Matrix step = Matrix::Zero(k, k);
      for (int p = 0; p < np; ++p) step += delta(p) * gens[p];
      const Matrix candidate = q * step.exp();
      const double c = cost(candidate);
      if (c < current) {
        q = candidate;
        const double gain = current - c;
        current = c;
        lambda = std::max(lambda / 10, 1e-12);
        improved = true;
        if (delta.norm() < 1e-14 || gain < 1e-30) return q;
        break;
      }
      lambda *= 10;
    }
    if (!improved) break;
  }
  return q;
}

FactorIsometry fit_sphere(const std::vector<Vector>& a, const std::vector<Vector>& b, int factor,
                          const AlignOptions& opts) {
  const int k = static_cast<int>(a.front().size());
  Matrix cross = Matrix::Zero(k, k), cov = Matrix::Zero(k, k);
  for (size_t j = 0; j < a.size(); ++j) {
    cross.noalias() += b[j] * a[j].transpose();
    cov.noalias() += a[j] * a[j].transpose();
  }
  require_full_rank(cov, factor, "spherical", opts);
  return {procrustes_rotation(cross), Vector::Zero(k)};
}

FactorIsometry fit_flat(const std::vector<Vector>& a, const std::vector<Vector>& b, int factor,
                        const AlignOptions& opts) {
  const int k = static_cast<int>(a.front().size());
  Vector ca = Vector::Zero(k), cb = Vector::Zero(k);
  for (size_t j = 0; j < a.size(); ++j) {
    ca += a[j];
    cb += b[j];
  }
  ca /= static_cast<double>(a.size());
  cb /= static_cast<double>(a.size());
  Matrix cross = Matrix::Zero(k, k), cov = Matrix::Zero(k, k);
  for (size_t j = 0; j < a.size(); ++j) {
    cross.noalias() += (b[j] - cb) * (a[j] - ca).transpose();
    cov.noalias() += (a[j] - ca) * (a[j] - ca).transpose();
  }
  require_full_rank(cov, factor, "flat", opts);
  const Matrix q = procrustes_rotation(cross);
  return {q, cb - q * ca};
}

FactorIsometry fit_hyperbolic(const std::vector<Vector>& a, const std::vector<Vector>& b, int factor,
                              const Vector& eta, const AlignOptions& opts) {
  const int k = static_cast<int>(a.front().size());
  auto sheet_of = [&](const std::vector<Vector>& pts, const char* which) {
    int sign = 0;
    for (const auto& p : pts) {
      const int s = p(0) > 0 ? 1 : -1;
      if (sign != 0 && s != sign)
        throw DegenerateInput("factor " + std::to_string(factor + 1) + ": " + which +
                              " points lie on both hyperboloid sheets");
      sign = s;
    }
    return sign;
  };
  if (sheet_of(a, "source") != sheet_of(b, "target"))
    throw DegenerateInput("factor " + std::to_string(factor + 1) +
                          ": source and target lie on different hyperboloid sheets");

  Matrix cross = Matrix::Zero(k, k), cov = Matrix::Zero(k, k);
  for (size_t j = 0; j < a.size(); ++j) {
    cross.noalias() += b[j] * a[j].transpose();
    cov.noalias() += a[j] * a[j].transpose();
  }
  require_full_rank(cov, factor, "hyperbolic", opts);

  Matrix q = Matrix::Identity(k, k);
  if (numerical_rank(cov, 1e-10) == k) {
    Matrix m = cov.transpose().ldlt().solve(cross.transpose()).transpose();
    // Polar factors that flip the time orientation are discarded in favour of
    // refinement from the identity.
    if (lorentz_polar(m, eta) && m(0, 0) > 0) q = m;
  }
  q = refine_on_form_group(q, eta, a, b);
  return {q, Vector::Zero(k)};
}

}  // namespace

double factor_geodesic_distance(const MultiproductSpec& spec, int i, const Vector& a, const Vector& b) {
  const int o = spec.ambient_offset(i), k = spec.ambient_dim(i);
  const Vector d = a.segment(o, k) - b.segment(o, k);
  const double c = spec.factor(i).curvature;
  if (c == 0) return d.norm();
  const double r = 1 / std::sqrt(std::abs(c));
  if (c > 0) return 2 * r * std::asin(std::min(1.0, d.norm() / (2 * r)));
  double chord2 = d.squaredNorm() - 2 * d(0) * d(0);
  return 2 * r * std::asinh(std::sqrt(std::max(0.0, chord2)) / (2 * r));
}

AmbientPoint IsometryAlignment::apply(const MultiproductSpec& spec, const AmbientPoint& x) const {
  AmbientPoint y(x.size());
  for (int i = 0; i < spec.num_factors(); ++i) {
    const int o = spec.ambient_offset(i), k = spec.ambient_dim(i);
    y.segment(o, k) = blocks[i].linear * x.segment(o, k) + blocks[i].translation;
  }
  return y;
}

double IsometryAlignment::form_preservation_error(const MultiproductSpec& spec) const {
  double err = 0;
  for (int i = 0; i < spec.num_factors(); ++i) {
    const Matrix eta = spec.factor_signature(i).asDiagonal();
    const Matrix& q = blocks[i].linear;
    err = std::max(err, (q.transpose() * eta * q - eta).cwiseAbs().maxCoeff());
  }
  return err;
}

double sup_distance(const MultiproductSpec& spec, std::span<const AmbientPoint> a,
                    std::span<const AmbientPoint> b) {
  double sup = 0;
  for (size_t j = 0; j < a.size(); ++j) {
    double s = 0;
    for (int i = 0; i < spec.num_factors(); ++i) {
      const double d = factor_geodesic_distance(spec, i, a[j], b[j]);
      s += d * d;
    }
    sup = std::max(sup, std::sqrt(s));
  }
  return sup;
}

IsometryAlignment align_isometry(std::span<const AmbientPoint> from, std::span<const AmbientPoint> to,
                                 const MultiproductSpec& spec, const AlignOptions& options) {
  if (from.size() != to.size()) throw std::invalid_argument("align_isometry: point lists differ in length");
  if (from.empty()) throw DegenerateInput("align_isometry: empty point lists");
  for (size_t j = 0; j < from.size(); ++j) {
    detail::check_ambient_size(from[j], spec);
    detail::check_ambient_size(to[j], spec);
  }

  IsometryAlignment out;
  for (int i = 0; i < spec.num_factors(); ++i) {
    const int o = spec.ambient_offset(i), k = spec.ambient_dim(i);
    std::vector<Vector> a, b;
    a.reserve(from.size());
    b.reserve(from.size());
    for (size_t j = 0; j < from.size(); ++j) {
      a.push_back(from[j].segment(o, k));
      b.push_back(to[j].segment(o, k));
    }
    const double c = spec.factor(i).curvature;
    if (c > 0)
      out.blocks.push_back(fit_sphere(a, b, i, options));
    else if (c < 0)
      out.blocks.push_back(fit_hyperbolic(a, b, i, spec.factor_signature(i), options));
    else
      out.blocks.push_back(fit_flat(a, b, i, options));
  }

  std::vector<AmbientPoint> mapped;
  mapped.reserve(from.size());
  for (const auto& p : from) mapped.push_back(out.apply(spec, p));
  out.residual = sup_distance(spec, mapped, to);
  return out;
}

}  // namespace mpsf
