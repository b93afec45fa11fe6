#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mpsf/compat.hpp"
#include "mpsf/family.hpp"
#include "mpsf/fixtures.hpp"
#include "support.hpp"

using namespace mpsf;

TEST_SUITE("fixtures") {
  TEST_CASE("catalogue") {
    const auto all = list_fixtures();
    auto find = [&](const std::string& n) {
      return std::find_if(all.begin(), all.end(), [&](const FixtureInfo& f) { return f.name == n; });
    };
    REQUIRE(find("slice") != all.end());
    const auto hel = find("helicoid");
    REQUIRE(hel != all.end());
    CHECK(hel->spec.num_factors() == 1);
    CHECK(hel->spec.factor(0).curvature == 0);
    CHECK(hel->spec.factor(0).dim == 3);
  }

  TEST_CASE("every fixture generates on a 32 x 32 chart with valid data") {
    for (const auto& info : list_fixtures()) {
      CAPTURE(info.name);
      FixtureBundle fb;
      REQUIRE_NOTHROW(fb = generate_fixture(info.name, 32, 32));
      CHECK_NOTHROW(validate_dataset(fb.dataset));
      CHECK(fb.dataset.spec == info.spec);
      CHECK(fb.dataset.chart.periodic_u == info.periodic_u);
      for (const auto& p : fb.ground_truth.points)
        for (double r : factor_constraint_residual(p, fb.dataset.spec)) CHECK(r < 1e-13);
    }
  }

  TEST_CASE("ground truth passes verification at the default grid") {
    // The periodic charts span 2 pi, so at 32 nodes the isometry residual is still above 1e-2.
    for (const auto& info : list_fixtures()) {
      CAPTURE(info.name);
      const auto fb = generate_fixture(info.name, 64, 64);
      CHECK(verify_immersion(fb.ground_truth, fb.dataset).pass());
    }
  }

  TEST_CASE("closed-form operators") {
    const auto slice = generate_fixture("slice", 17, 17);
    const auto torus = generate_fixture("clifford_torus", 17, 17);
    Matrix e11 = Matrix::Zero(2, 2);
    e11(0, 0) = 1;
    for (int k = 0; k < slice.dataset.num_nodes(); ++k) {
      CHECK(slice.dataset.B[k][0].norm() + slice.dataset.B[k][1].norm() == 0);
      CHECK((slice.dataset.f[0][k] - Matrix::Identity(2, 2)).norm() < 1e-15);
      CHECK(slice.gauss_curvature[k] == 1);
      CHECK(torus.dataset.B[k][0].norm() + torus.dataset.B[k][1].norm() < 1e-15);
      CHECK((torus.dataset.f[0][k] - e11).norm() < 1e-15);
      CHECK((torus.dataset.t[0][k] - e11).norm() < 1e-15);
      CHECK(torus.dataset.h[0][k].norm() < 1e-15);
      CHECK(torus.gauss_curvature[k] == 0);
    }
    const auto hel = generate_fixture("helicoid", 33, 33);
    CHECK(trace_residual(hel.dataset).max < 1e-14);
    const auto& c = hel.dataset.chart;
    for (int k = 0; k < c.num_nodes(); ++k)
      CHECK(hel.gauss_curvature[k] == doctest::Approx(-1 / std::pow(std::cosh(c.v(c.node(k).iv)), 4)));
    // The intrinsic curvature of the sampled metric agrees to O(h^2).
    const auto kin = intrinsic_gauss_curvature(hel.dataset);
    double e = 0;
    for (int k = 0; k < c.num_nodes(); ++k)
      if (!std::isnan(kin[k])) e = std::max(e, std::abs(kin[k] - hel.gauss_curvature[k]));
    CHECK(e < 2e-3);
  }

  TEST_CASE("strict profile") {
    const auto strict = ToleranceProfile::strict();
    CHECK(strict.name == "strict");
    CHECK(strict.grid == 256);
    CHECK(strict.differential < ToleranceProfile::standard().differential);
    CHECK_THROWS_AS(ToleranceProfile::from_name("lenient"), std::invalid_argument);
    for (const auto& info : list_fixtures()) {
      CAPTURE(info.name);
      CHECK(compatibility_verdict(generate_fixture(info.name, 64, 64).dataset, strict).pass());
    }
  }

  TEST_CASE("product of great circles is the Clifford torus") {
    const auto a = generate_fixture("product_of_curves(0,0)", 21, 21);
    const auto b = generate_fixture("clifford_torus", 21, 21);
    CHECK(a.dataset == b.dataset);
    REQUIRE(a.ground_truth.points.size() == b.ground_truth.points.size());
    for (size_t k = 0; k < a.ground_truth.points.size(); ++k)
      CHECK((a.ground_truth.points[k] - b.ground_truth.points[k]).norm() == 0);
  }

  TEST_CASE("bad names and charts") {
    CHECK_THROWS_AS(generate_fixture("torus_of_doom", 9, 9), std::invalid_argument);
    CHECK_THROWS_AS(generate_fixture("product_of_curves(1)", 9, 9), std::invalid_argument);
    CHECK_THROWS_AS(generate_fixture("slice(2,3)", 9, 9), std::invalid_argument);
    const Chart wrong = make_chart(9, 9, 0, 1, 0, 1, true, false);
    CHECK_THROWS_AS(generate_fixture("slice", wrong), ValidationError);
    const Chart sub = make_chart(9, 9, 0.1, 0.6, -0.2, 0.3);
    const auto fb = generate_fixture("diagonal", sub);
    CHECK(fb.dataset.chart == sub);
  }
}
