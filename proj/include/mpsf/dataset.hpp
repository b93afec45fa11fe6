#pragma once

#include <array>
#include <vector>

#include "mpsf/chart.hpp"
#include "mpsf/multiproduct.hpp"

namespace mpsf {

// Discrete submanifold data on a chart. Tangent quantities use chart
// coordinates; E quantities use a fixed orthonormal frame nu_1..nu_d.
//
//   g[node]          n x n metric
//   B[node][a]       n x n, components of <B(., .), nu_a>
//   conn_u/v[node]   d x d skew, nabla_mu nu_b = sum_a W_mu(a, b) nu_a
//   f/h/t[i][node]   factor i operators, h : TM -> E is d x n
struct GeometricDataset {
  MultiproductSpec spec;
  Chart chart;
  int base_dim = 2;
  int bundle_rank = 0;
  std::vector<Matrix> g;
  std::vector<std::vector<Matrix>> B;
  std::vector<Matrix> conn_u;
  std::vector<Matrix> conn_v;
  std::vector<std::vector<Matrix>> f;
  std::vector<std::vector<Matrix>> h;
  std::vector<std::vector<Matrix>> t;

  int num_nodes() const { return chart.num_nodes(); }
  const Matrix& connection(int dir, int node) const { return dir == 0 ? conn_u[node] : conn_v[node]; }

  friend bool operator==(const GeometricDataset& a, const GeometricDataset& b);
};

// One factor's induced operators at a node.
struct OperatorQuadruple {
  Matrix f;  // n x n
  Matrix h;  // d x n
  Matrix s;  // n x d
  Matrix t;  // d x d

  // pi = [f s; h t] acting on TM + E.
  Matrix block() const;
};

// Checks the structural invariants of a dataset (sizes, bookkeeping, SPD metric,
// symmetric B, skew connection, finiteness, seam periodicity) and throws
// ValidationError / DimensionMismatch naming the field and node.
void validate_dataset(const GeometricDataset& ds);

// Lower Cholesky factor L of g = L L^T; throws ValidationError if g is not SPD.
Matrix metric_factor(const Matrix& g);

// s with g(X, s xi) = <h X, xi>, i.e. s = g^{-1} h^T.
Matrix derive_adjoint_s(const Matrix& g, const Matrix& h);
Matrix derive_adjoint_s(const GeometricDataset& ds, int node, int i);

// Adjoint of an n x d operator back to d x n: h = s^T g.
Matrix derive_adjoint_h(const Matrix& g, const Matrix& s);

OperatorQuadruple operator_quadruple(const GeometricDataset& ds, int node, int i);

// A_xi with <A_xi X, Y> = <B(X, Y), xi>, i.e. g^{-1} sum_a xi_a B^a.
Matrix shape_operator(const std::vector<Matrix>& B, const Vector& xi, const Matrix& g);

// Gamma[mu](a, c) = Gamma^a_{mu c} from finite differences of the metric field.
using Christoffel = std::array<Matrix, 2>;
Christoffel christoffels(const Chart& chart, const std::vector<Matrix>& g, int iu, int iv);
std::vector<Christoffel> christoffel_field(const Chart& chart, const std::vector<Matrix>& g);

// Relabel the E frame by a constant orthogonal Q: nu'_b = sum_a Q(a, b) nu_a.
GeometricDataset transform_normal_frame(const GeometricDataset& ds, const Matrix& q);

}  // namespace mpsf
