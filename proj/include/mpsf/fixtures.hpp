#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mpsf/dataset.hpp"
#include "mpsf/immersion.hpp"

namespace mpsf {

// Analytic surface with its dataset, sampled ground-truth immersion and
// closed-form scalars.
struct FixtureBundle {
  std::string name;
  GeometricDataset dataset;
  ImmersionField ground_truth;
  std::vector<double> gauss_curvature;     // K per node
  std::vector<double> second_form_norm2;   // |B|^2 per node
  std::optional<std::array<double, 2>> kahler;  // (C1, C2) for surfaces in S2 x S2
};

struct FixtureInfo {
  std::string name;
  MultiproductSpec spec;
  bool periodic_u = false;
  bool periodic_v = false;
};

// slice, diagonal, clifford_torus, product_of_curves, helicoid, catenoid,
// plane, round_sphere_in_r3, geodesic_cylinder_s2xr, hyperbolic_slice.
// "product_of_curves(k1,k2)" selects the geodesic curvatures of the two
// circles; the bare name uses (0.5, 1).
std::vector<FixtureInfo> list_fixtures();

// The fixture's natural chart with nu x nv nodes.
Chart default_fixture_chart(const std::string& name, int nu, int nv);

FixtureBundle generate_fixture(const std::string& name, int nu = 64, int nv = 64);
// Samples on a caller-supplied chart; periodic flags must match the fixture's
// periods. Throws std::invalid_argument for unknown names and ValidationError
// for incompatible charts.
FixtureBundle generate_fixture(const std::string& name, const Chart& chart);

}  // namespace mpsf
