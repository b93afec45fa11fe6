#pragma once

#include <vector>

#include "mpsf/immersion.hpp"

namespace mpsf {

// Positively oriented g-rotation by pi/2 in chart coordinates (orientation from
// the (u, v) order): J = L^{-T} [0 -1; 1 0] L^T with g = L L^T.
Matrix complex_structure(const Matrix& g);

// Max over nodes and normals of |tr(g^{-1} B^a)|, and the node attaining it.
struct TraceStat {
  double max = 0;
  NodeIndex node;
};
TraceStat trace_residual(const GeometricDataset& ds);

// Max of |J^T B^a - B^a J| over nodes: trace-free symmetric B commutes with J
// as a bilinear form, B(JX, Y) = B(X, JY).
double conjugation_residual(const GeometricDataset& ds);

struct RotatedDataset {
  GeometricDataset dataset;
  double theta = 0;
  std::vector<Matrix> rotation;  // R_theta per node
  std::vector<Matrix> j;         // J per node
};

// Data of the rotated immersion: B_theta(X, Y) = B(R^{-1} X, Y),
// f_theta = R f R^{-1}, h_theta = h R^{-1}, t and the normal connection
// unchanged. Requires n = 2 and trace-free B (|tr_g B^a| <= 1e-10); otherwise
// throws ValidationError at the worst node.
RotatedDataset rotate_dataset(const GeometricDataset& ds, double theta);

struct FamilyMember {
  double theta = 0;
  ImmersionField immersion;
  CompatReport verification;  // against the rotated dataset
  double trace = 0;           // trace_residual of the rotated dataset
};

// x_theta for each angle, all seeded at `base` so that x_theta(base) = x(base);
// the seed is the default seed with its tangent rows rotated by R_theta, which
// makes d(x_theta) = dx o R_theta^{-1} at the base node.
std::vector<FamilyMember> generate_family(const GeometricDataset& ds, const std::vector<double>& thetas,
                                          NodeIndex base,
                                          const ToleranceProfile& profile = ToleranceProfile::standard());

}  // namespace mpsf
