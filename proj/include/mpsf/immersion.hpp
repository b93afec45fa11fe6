#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mpsf/ambient.hpp"
#include "mpsf/flatconn.hpp"
#include "mpsf/report.hpp"

namespace mpsf {

// Sampled immersion phi of a chart into the ambient product.
struct ImmersionField {
  MultiproductSpec spec;
  Chart chart;
  std::vector<AmbientPoint> points;
  // phi_*(d_u), phi_*(d_v) per node.
  std::array<std::vector<AmbientVector>, 2> push;
  // Images of the E frame, normals[node][a].
  std::vector<std::vector<AmbientVector>> normals;
  // Flat factor only: max gap between row-first and column-first integration.
  double flat_closure = 0;
};

// Builds phi from a parallel frame: curved coordinates are g~(sigma_k, xi_i),
// the flat factor is integrated from the 1-form g~(pi_m d, sigma_k) by the
// trapezoid rule along the frame's sweep. The base node maps to the seed data.
ImmersionField synthesize_immersion(const ParallelFrame& frame, const GeometricDataset& ds);

// Entries: isometry, frame_gram, factor_constraint, projection_tangent,
// projection_normal, second_fundamental_form, normal_connection. Derivatives of
// phi and of the normal images are finite differences of the sampled fields.
CompatReport verify_immersion(const ImmersionField& im, const GeometricDataset& ds,
                              const ToleranceProfile& profile = ToleranceProfile::standard());

// Smallest singular value of [phi_*e_1, phi_*e_2] over nodes, e_k an
// orthonormal tangent frame (1 for an isometric immersion).
double min_pushforward_singular_value(const ImmersionField& im, const GeometricDataset& ds);

struct Reconstruction {
  ParallelFrame frame;
  ImmersionField immersion;
  CompatReport verification;
  std::optional<IsometryAlignment> alignment;  // against the ground truth, if given
};

// Middle node of the chart.
NodeIndex default_base_node(const Chart& chart);

// frame -> immersion -> verification, plus alignment to `ground_truth` when
// provided (rank-deficient factor clouds are accepted there).
Reconstruction reconstruct(const GeometricDataset& ds, NodeIndex base,
                           const std::vector<AmbientPoint>* ground_truth = nullptr,
                           const ToleranceProfile& profile = ToleranceProfile::standard(),
                           TransportScheme scheme = TransportScheme::magnus4);
Reconstruction reconstruct(const GeometricDataset& ds, const std::vector<AmbientPoint>* ground_truth = nullptr,
                           const ToleranceProfile& profile = ToleranceProfile::standard());

// Factor-wise alignment of one immersion's points onto another's, residual in
// sup geodesic distance.
IsometryAlignment align_immersions(const ImmersionField& from, const std::vector<AmbientPoint>& to);

}  // namespace mpsf
