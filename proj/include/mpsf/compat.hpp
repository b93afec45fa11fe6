#pragma once

#include <vector>

#include "mpsf/dataset.hpp"
#include "mpsf/report.hpp"

namespace mpsf {

// Residual norms are spectral norms of the operators written in the
// orthonormal tangent frame from the Cholesky factor of g and the orthonormal
// E frame. Entry names:
//   algebraic:    f_symmetry t_symmetry sum_f sum_t sum_s sum_h
//                 product_fh product_th product_fs product_hf rank
//   differential: parallel_f parallel_h parallel_t parallel_s
//   curvature:    gauss codazzi ricci
CompatReport check_algebraic(const GeometricDataset& ds, const ToleranceProfile& profile = ToleranceProfile::standard());
CompatReport check_differential(const GeometricDataset& ds,
                                const ToleranceProfile& profile = ToleranceProfile::standard());
// Curvature residuals are sampled on nodes at distance >= 2 from non-periodic
// edges, where the nested difference quotients stay second order.
CompatReport check_curvature_equations(const GeometricDataset& ds,
                                       const ToleranceProfile& profile = ToleranceProfile::standard());
CompatReport compatibility_verdict(const GeometricDataset& ds,
                                   const ToleranceProfile& profile = ToleranceProfile::standard());

// Numerical rank of each factor's block projection at a node.
std::vector<int> projection_ranks(const GeometricDataset& ds, int node, double rel_tol = 1e-8);

// Intrinsic Gauss curvature <R(e1,e2)e2,e1> from differenced Christoffels;
// NaN on nodes closer than 2 to a non-periodic edge.
std::vector<double> intrinsic_gauss_curvature(const GeometricDataset& ds);

// Right-hand side of the Gauss equation, <RHS(e1,e2)e2,e1>, at every node.
std::vector<double> extrinsic_gauss_curvature(const GeometricDataset& ds);

namespace detail {
// Columns B^a e_mu, an n x d matrix.
Matrix b_column(const std::vector<Matrix>& B, int mu);
}  // namespace detail

}  // namespace mpsf
