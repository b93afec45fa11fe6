#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mpsf/compat.hpp"
#include "mpsf/family.hpp"
#include "mpsf/fixtures.hpp"
#include "support.hpp"

using namespace mpsf;

namespace {

constexpr double kPi = std::numbers::pi;

// Conjugate helicoid: x* with dx* = dx o J, here (-cosh v sin u, cosh v cos u, v).
Vector conjugate_helicoid(double u, double v) {
  return Eigen::Vector3d(-std::cosh(v) * std::sin(u), std::cosh(v) * std::cos(u), v);
}

// Sup distance between the family member at theta and the classical formula
// x0 + cos(theta)(x - x0) + sin(theta)(x* - x*0), where the member is mapped by
// the isometry that brings the theta = 0 member onto the ground truth.
double helicoid_family_error(int n, double theta) {
  const auto fb = generate_fixture("helicoid", n, n);
  const auto& c = fb.dataset.chart;
  const NodeIndex base = default_base_node(c);
  const auto fam = generate_family(fb.dataset, {0.0, theta}, base);
  const auto& spec = fb.dataset.spec;
  const auto iso = align_immersions(fam[0].immersion, fb.ground_truth.points);
  const int kb = c.index(base.iu, base.iv);
  const Vector x0 = fb.ground_truth.points[kb];
  const Vector y0 = conjugate_helicoid(c.u(base.iu), c.v(base.iv));
  double e = 0;
  for (int k = 0; k < c.num_nodes(); ++k) {
    const NodeIndex p = c.node(k);
    const Vector expect = x0 + std::cos(theta) * (fb.ground_truth.points[k] - x0) +
                          std::sin(theta) * (conjugate_helicoid(c.u(p.iu), c.v(p.iv)) - y0);
    e = std::max(e, (iso.apply(spec, fam[1].immersion.points[k]) - expect).norm());
  }
  return e;
}

}  // namespace

TEST_SUITE("family") {
  TEST_CASE("theta = 0 returns the input, theta = 2 pi returns it up to roundoff") {
    const auto ds = generate_fixture("helicoid", 17, 17).dataset;
    CHECK(rotate_dataset(ds, 0).dataset == ds);
    const auto full = rotate_dataset(ds, 2 * kPi).dataset;
    for (int k = 0; k < ds.num_nodes(); ++k) {
      CHECK((full.B[k][0] - ds.B[k][0]).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((full.f[0][k] - ds.f[0][k]).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((full.h[0][k] - ds.h[0][k]).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  TEST_CASE("complex structure is a g-isometric square root of -Id") {
    Matrix g(2, 2);
    g << 2, 0.4, 0.4, 1;
    const Matrix j = complex_structure(g);
    CHECK((j * j + Matrix::Identity(2, 2)).norm() < 1e-14);
    CHECK((j.transpose() * g * j - g).norm() < 1e-14);
    // Positive orientation: det[X, JX] > 0.
    Vector x(2);
    x << 1, 0;
    Matrix m(2, 2);
    m << x, j * x;
    CHECK(m.determinant() > 0);
  }

  TEST_CASE("helicoid at pi/2 has the catenoid second fundamental form") {
    const auto hel = generate_fixture("helicoid", 17, 17).dataset;
    const auto cat = generate_fixture("catenoid", 17, 17).dataset;
    const auto rot = rotate_dataset(hel, kPi / 2).dataset;
    for (int k = 0; k < hel.num_nodes(); ++k) {
      CHECK((hel.g[k] - cat.g[k]).norm() < 1e-13);
      CHECK((rot.B[k][0] - cat.B[k][0]).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  TEST_CASE("trace-free B commutes with J") {
    for (const char* name : {"helicoid", "catenoid", "plane"}) {
      CAPTURE(name);
      CHECK(conjugation_residual(generate_fixture(name, 17, 17).dataset) < 1e-13);
    }
    CHECK(conjugation_residual(generate_fixture("round_sphere_in_r3", 17, 17).dataset) > 0.1);
  }

  TEST_CASE("B with a trace is rejected at a named node") {
    const auto ds = generate_fixture("round_sphere_in_r3", 17, 17).dataset;
    try {
      rotate_dataset(ds, 0.3);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "B");
      CHECK(e.node().has_value());
    }
    CHECK_THROWS_AS(generate_family(ds, {0.3}, {8, 8}), ValidationError);
    CHECK_THROWS_AS(generate_family(generate_fixture("helicoid", 9, 9).dataset, {}, {4, 4}), std::invalid_argument);
  }

  TEST_CASE("helicoid family follows the classical formula at second order") {
    for (double theta : {kPi / 4, kPi / 2, 2.0, kPi}) {
      CAPTURE(theta);
      const double e1 = helicoid_family_error(33, theta), e2 = helicoid_family_error(65, theta);
      CHECK(e2 < 1e-4);
      CHECK(test::order(1.0 / 32, e1, 1.0 / 64, e2) == doctest::Approx(2).epsilon(0.1));
    }
  }

  TEST_CASE("base node and pushforward are pinned") {
    const auto ds = generate_fixture("helicoid", 33, 33).dataset;
    const NodeIndex base{10, 20};
    const double theta = 0.9;
    const auto fam = generate_family(ds, {0.0, theta}, base);
    const int k = ds.chart.index(base.iu, base.iv);
    CHECK((fam[0].immersion.points[k] - fam[1].immersion.points[k]).norm() < 1e-14);
    // d(x_theta) = dx o R^{-1} at the base node.
    const Matrix r = rotate_dataset(ds, theta).rotation[k];
    Matrix dx0(3, 2), dxt(3, 2);
    dx0 << fam[0].immersion.push[0][k], fam[0].immersion.push[1][k];
    dxt << fam[1].immersion.push[0][k], fam[1].immersion.push[1][k];
    CHECK((dxt * r - dx0).norm() < 1e-2);
  }

  TEST_CASE("slice family is constant up to isometry") {
    for (int n : {17, 33}) {
      const auto ds = generate_fixture("slice", n, n).dataset;
      std::vector<double> thetas;
      for (int i = 0; i < 6; ++i) thetas.push_back(i * kPi / 3);
      const auto fam = generate_family(ds, thetas, default_base_node(ds.chart));
      for (const auto& m : fam) {
        CAPTURE(m.theta);
        CHECK(align_immersions(m.immersion, fam[0].immersion.points).residual < 1e-10);
      }
    }
  }

  TEST_CASE("sixteen angles: trace, metric and compatibility") {
    const auto ds = generate_fixture("helicoid", 64, 64).dataset;
    const auto src = compatibility_verdict(ds);
    std::vector<double> thetas;
    for (int i = 0; i < 16; ++i) thetas.push_back(2 * kPi * i / 16);
    const auto fam = generate_family(ds, thetas, default_base_node(ds.chart));
    const ToleranceProfile prof;
    for (const auto& m : fam) {
      CAPTURE(m.theta);
      CHECK(m.trace <= 1e-10);
      CHECK(m.verification.at("isometry").max <= prof.verification);
      const auto rep = compatibility_verdict(rotate_dataset(ds, m.theta).dataset);
      CHECK(rep.pass());
      for (const auto& [name, s] : rep.entries) {
        CAPTURE(name);
        CHECK(s.max <= 2 * src.at(name).max + test::kExactFloor);
      }
    }
  }

  TEST_CASE("members vary continuously with theta") {
    const auto ds = generate_fixture("helicoid", 33, 33).dataset;
    const double d = 1e-4;
    const auto fam = generate_family(ds, {1.0, 1.0 + d}, default_base_node(ds.chart));
    double e = 0;
    for (int k = 0; k < ds.num_nodes(); ++k)
      e = std::max(e, (fam[0].immersion.points[k] - fam[1].immersion.points[k]).norm());
    CHECK(e > 0);
    CHECK(e < 3 * d);
  }
}
