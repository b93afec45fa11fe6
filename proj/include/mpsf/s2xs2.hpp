#pragma once

#include <array>
#include <string>
#include <vector>

#include "mpsf/immersion.hpp"

namespace mpsf {

// Blocks of a complex structure J_i along a surface, in orthonormal frames
// (e_1, e_2) of the tangent plane and (nu_1, nu_2) of the normal plane:
//   j(r, c) = <e_r, J e_c>     k(a, c) = <nu_a, J e_c>
//   l(r, a) = <e_r, J nu_a>    m(b, a) = <nu_b, J nu_a>
struct ComplexBlocks {
  Matrix j, k, l, m;
};

// Per node, the blocks of J_1 = (J, J) and J_2 = (J, -J), J = p x . on S^2.
struct ComplexDecomposition {
  std::vector<std::array<ComplexBlocks, 2>> nodes;
  int num_nodes() const { return static_cast<int>(nodes.size()); }
};

// Throws std::invalid_argument unless the spec is two unit 2-spheres.
void require_s2xs2(const MultiproductSpec& spec);

// Ambient action of J_1 (which = 0) or J_2 (which = 1) at a point of S^2 x S^2.
AmbientVector apply_complex_structure(int which, const AmbientPoint& x, const AmbientVector& v);

// Decomposition from explicit orthonormal frames.
ComplexDecomposition decompose_complex(const MultiproductSpec& spec, const std::vector<AmbientPoint>& points,
                                       const std::vector<std::array<AmbientVector, 2>>& tangent,
                                       const std::vector<std::array<AmbientVector, 2>>& normal);

// Decomposition along an immersion of a dataset's chart, with e = phi_* L^{-T}
// (g = L L^T) and nu_a the images of the dataset's E frame.
ComplexDecomposition decompose_complex(const ImmersionField& im, const GeometricDataset& ds);

// Conjugate every node by orthogonal changes of the tangent (qt) and normal
// (qn) frames: new frames e' = e qt, nu' = nu qn.
ComplexDecomposition change_frames(const ComplexDecomposition& cd, const std::vector<Matrix>& qt,
                                   const std::vector<Matrix>& qn);

// Factor operators from the two structures, in the same orthonormal frames.
// With Pi = (Id - J1 J2) / 2 onto the first factor and (Id + J1 J2) / 2 onto
// the second:
//   f = (Id -+ (j1 j2 + l1 k2)) / 2    h = -+(k1 j2 + m1 k2) / 2
//   s = -+(j1 l2 + l1 m2) / 2          t = (Id -+ (k1 l2 + m1 m2)) / 2
std::array<OperatorQuadruple, 2> to_projection_operators(const std::array<ComplexBlocks, 2>& node);

// `ds` with f, h, t replaced by the dictionary output (converted to chart
// coordinates), so the compat checks apply unchanged.
GeometricDataset dictionary_dataset(const ComplexDecomposition& cd, const GeometricDataset& ds);

// Entries (max over both structures):
//   antisymmetry_j antisymmetry_m adjoint_kl      j, m skew; k = -l^T
//   square_tt square_nt square_tn square_nn       J_i^2 = -Id, four blocks
//   commute_tt commute_nt commute_tn commute_nn   J_1 J_2 = J_2 J_1
//   parallel_j parallel_k parallel_m parallel_l   derivative relations for j, k, m, l
// The first three groups use profile.algebraic, the last profile.differential.
CompatReport check_complex_relations(const ComplexDecomposition& cd, const GeometricDataset& ds,
                                     const ToleranceProfile& profile = ToleranceProfile::standard());

struct S2S2Curvature {
  // K from the general Gauss equation with the dictionary operators.
  std::vector<double> k_general;
  // The closed-form complex Gauss display, evaluated as printed.
  std::vector<double> k_printed;
  // Normal curvature <R^perp(e1, e2) nu_1, nu_2> from the normal connection
  // (NaN within 2 of a non-periodic edge), and its prediction
  //   1/2 [<H e2, nu1><H e1, nu2> - <H e1, nu1><H e2, nu2>] + <[A_1, A_2] e1, e2>
  // with H = k1 j2 + m1 k2; `normal_printed` drops the 1/2 and reverses the
  // commutator, as in the printed display.
  std::vector<double> normal_measured;
  std::vector<double> normal_predicted;
  std::vector<double> normal_printed;
  // Codazzi in complex form: residual of the general Codazzi equation for the
  // dictionary dataset, and the gap between the complex right-hand side
  //   1/2 [<Y, F Z> H X - <X, F Z> H Y],  F = j1 j2 + l1 k2,
  // and the general right-hand side (zero up to roundoff).
  ResidualStat codazzi;
  double codazzi_identity_gap = 0;
  ResidualStat ricci;  // |normal_measured - normal_predicted|
};
S2S2Curvature gauss_curvature_s2s2(const ComplexDecomposition& cd, const GeometricDataset& ds,
                                   const ToleranceProfile& profile = ToleranceProfile::standard());

// Kahler functions C_i = <j_i e1, e2> per node, i = 1, 2.
std::vector<std::array<double, 2>> kahler_functions(const ComplexDecomposition& cd);

struct SurfaceLabels {
  std::array<bool, 2> complex{};     // |k_i| + |l_i| <= tol
  std::array<bool, 2> lagrangian{};  // |j_i| + |m_i| <= tol
  bool generic() const { return !complex[0] && !complex[1] && !lagrangian[0] && !lagrangian[1]; }
  // e.g. "complex-J1;complex-J2", or "generic".
  std::string text() const;
  friend bool operator==(const SurfaceLabels&, const SurfaceLabels&) = default;
};
std::vector<SurfaceLabels> classify_surface(const ComplexDecomposition& cd, double tol);

}  // namespace mpsf
