#pragma once

#include <array>
#include <vector>

#include "mpsf/dataset.hpp"

namespace mpsf {

// The bundle F = TM + E + (one line per curved factor) in the frame
// (d_1..d_n, nu_1..nu_d, xi^_1..), where xi^_i = sqrt|c_i| xi_i is a unit
// section. A flat last factor contributes no line.
struct TotalBundle {
  int n = 2;
  int d = 0;
  std::vector<int> xi_factor;  // factor index of each xi^ slot
  int rank() const { return n + d + static_cast<int>(xi_factor.size()); }
  int xi_slot(int factor) const;  // -1 for the flat factor
  // diag(+1..+1, sign c_i): the Gram matrix of the frame up to the metric g.
  Vector line_signs(const MultiproductSpec& spec) const;
};

TotalBundle total_bundle(const GeometricDataset& ds);

// Gram matrix of the F frame at a node: diag(g, I_d, sign c_i).
Matrix bundle_gram(const GeometricDataset& ds, int node);

// Omega with D_mu sigma = d_mu sigma + Omega sigma in the F frame.
Matrix d_coefficients(const GeometricDataset& ds, const std::vector<Christoffel>& gamma, int node, int dir);
Matrix d_coefficients(const GeometricDataset& ds, int iu, int iv, int dir);

// Both coefficient matrices at every node.
struct ConnectionField {
  TotalBundle bundle;
  std::array<std::vector<Matrix>, 2> omega;
};
ConnectionField connection_field(const GeometricDataset& ds);

// |d_u Omega_v - d_v Omega_u + [Omega_u, Omega_v]| in an orthonormal frame of F,
// divided by the area element. NaN on nodes within 2 of a non-periodic edge.
std::vector<double> curvature_residual(const GeometricDataset& ds);
double curvature_residual(const GeometricDataset& ds, int iu, int iv);
// Max over interior nodes.
double max_curvature_residual(const GeometricDataset& ds);

// Coefficients in the orthonormal gauge sigma^ = P sigma, P = diag(L^T, I, I),
// projected onto the part that is skew for the frame signature.
struct OrthonormalConnection {
  TotalBundle bundle;
  Vector signs;
  std::array<std::vector<Matrix>, 2> omega;  // Omega^
  std::vector<Matrix> gauge;                 // P per node
  std::vector<Matrix> gauge_inverse;
};
OrthonormalConnection orthonormal_connection(const GeometricDataset& ds);

enum class TransportScheme { magnus4, rk4 };

// Solves sigma' = -Omega(t) sigma between consecutive path nodes with one step
// per segment, Omega interpolated linearly along each segment. `omega[k]` is
// the coefficient for the direction of travel at path node k and `steps[k]`
// the signed parameter step from node k to node k + 1.
Matrix parallel_transport(const std::vector<Matrix>& omega, const std::vector<double>& steps, const Matrix& sigma0,
                          TransportScheme scheme = TransportScheme::magnus4);

// One step of the chosen scheme for constant-in-segment linear interpolation
// between omega_a (start) and omega_b (end).
Matrix transport_step(const Matrix& omega_a, const Matrix& omega_b, double step, const Matrix& sigma,
                      TransportScheme scheme);

struct ParallelFrame {
  TotalBundle bundle;
  NodeIndex base;
  // Per node an N_F x N_F matrix of section columns, in the (chart) F frame.
  std::vector<Matrix> sections;
  // Columns grouped by factor: columns [column_offset[i], column_offset[i+1]).
  std::vector<int> column_offset;
  // Signature of the section columns: -1 for the seed of a hyperbolic factor.
  Vector column_signs;
  // Max |sigma_rows_first - sigma_columns_first| over nodes.
  double sweep_discrepancy = 0;
  // Periodic directions: max |sigma(seam end) - sigma(seam start)|; 0 otherwise.
  double deck_mismatch_u = 0;
  double deck_mismatch_v = 0;
  // Max deviation of the section Gram matrix from its base value.
  double gram_drift = 0;
  // Max |pi_i sigma - sigma| over the factor-i columns (orthonormal gauge).
  double eigenbundle_drift = 0;
};

// Seeds an orthonormal basis of each eigenbundle at `base` (first vector
// sign(c_i) xi^_i for curved factors) and transports along the base row, then
// up and down every column. Throws RankConditionError if an eigenbundle has
// the wrong dimension at the base node.
ParallelFrame build_parallel_frame(const GeometricDataset& ds, NodeIndex base,
                                   TransportScheme scheme = TransportScheme::magnus4);

// As above, starting from given seed columns (orthonormal gauge) at `base`.
ParallelFrame build_parallel_frame(const GeometricDataset& ds, NodeIndex base, const Matrix& seed_orthonormal,
                                   TransportScheme scheme = TransportScheme::magnus4);

// The default seed columns in the orthonormal gauge at a node.
Matrix eigenbundle_seed(const GeometricDataset& ds, int node);

// Block projection pi_i on F in the orthonormal gauge.
Matrix bundle_projection(const GeometricDataset& ds, int node, int i);

}  // namespace mpsf
