#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mpsf/fixtures.hpp"
#include "mpsf/immersion.hpp"
#include "support.hpp"

using namespace mpsf;

TEST_SUITE("immersion") {
  TEST_CASE("slice reconstruction stays on the sphere and pins factor 2") {
    std::vector<double> h, drift, fit;
    for (int n : {33, 65}) {
      const auto fb = generate_fixture("slice", n, n);
      const auto& ds = fb.dataset;
      const auto rec = reconstruct(ds, &fb.ground_truth.points);
      double d = 0, pin = 0;
      const Vector p2 = rec.immersion.points[0].segment(3, 3);
      for (const auto& p : rec.immersion.points) {
        d = std::max(d, std::abs(p.segment(0, 3).squaredNorm() - 1));
        pin = std::max(pin, (p.segment(3, 3) - p2).norm());
      }
      CHECK(pin < 1e-12);
      CHECK(std::abs(p2.norm() - 1) < 1e-12);
      h.push_back(test::grid_h(ds.chart));
      drift.push_back(d);
      fit.push_back(rec.alignment->residual);
    }
    CHECK(drift[1] < 1e-9);
    // A great sphere is integrated exactly.
    CHECK(test::converges(h, fit, 1.8, 2.2));
  }

  TEST_CASE("helicoid and cylinder match their closed forms at second order") {
    for (const char* name : {"helicoid", "geodesic_cylinder_s2xr", "clifford_torus"}) {
      CAPTURE(name);
      std::vector<double> h, r;
      for (int n : {33, 65}) {
        const auto fb = generate_fixture(name, n, n);
        const auto rec = reconstruct(fb.dataset, &fb.ground_truth.points);
        h.push_back(test::grid_h(fb.dataset.chart));
        r.push_back(rec.alignment->residual);
      }
      CHECK(r[1] < 1e-4);
      CHECK(test::converges(h, r, 1.8, 2.2));
    }
  }

  TEST_CASE("verification families at 64 and 128") {
    for (const auto& info : list_fixtures()) {
      CAPTURE(info.name);
      const auto a = reconstruct(generate_fixture(info.name, 64, 64).dataset).verification;
      const auto b = reconstruct(generate_fixture(info.name, 128, 128).dataset).verification;
      CHECK(a.pass());
      for (const auto& [name, s] : a.entries) {
        CAPTURE(name);
        const double fine = b.at(name).max;
        if (fine <= test::kExactFloor) continue;
        CHECK(s.max / fine >= 3.5);
      }
    }
  }

  TEST_CASE("displacing one point off the sphere") {
    auto im = generate_fixture("slice", 17, 17).ground_truth;
    const auto ds = generate_fixture("slice", 17, 17).dataset;
    const NodeIndex bad{6, 9};
    const int k = ds.chart.index(bad.iu, bad.iv);
    const Vector radial = im.points[k].segment(0, 3);
    im.points[k].segment(0, 3) += 1e-3 * radial;
    const auto rep = verify_immersion(im, ds);
    const auto& st = rep.at("factor_constraint");
    CHECK(st.max == doctest::Approx(2e-3 + 1e-6).epsilon(1e-9));
    CHECK(st.argmax == bad);
  }

  TEST_CASE("totally geodesic data: second fundamental form residual is discretization noise") {
    for (const char* name : {"slice", "plane", "clifford_torus"}) {
      CAPTURE(name);
      const auto fb = generate_fixture(name, 33, 33);
      CHECK(verify_immersion(fb.ground_truth, fb.dataset).at("second_fundamental_form").max < 1e-12);
    }
  }

  TEST_CASE("two base nodes give congruent reconstructions") {
    std::vector<double> h, r;
    for (int n : {33, 65}) {
      const auto ds = generate_fixture("diagonal", n, n).dataset;
      const auto a = reconstruct(ds, NodeIndex{0, 0});
      const auto b = reconstruct(ds, NodeIndex{n - 1, (n - 1) / 2});
      h.push_back(test::grid_h(ds.chart));
      r.push_back(align_immersions(a.immersion, b.immersion.points).residual);
    }
    CHECK(r[1] < 1e-4);
    CHECK(test::converges(h, r, 1.7, 2.3));
  }

  TEST_CASE("rotated copy of the slice") {
    const auto fb = generate_fixture("slice", 33, 33);
    const auto& spec = fb.dataset.spec;
    const auto rec = reconstruct(fb.dataset);
    std::mt19937 rng(11);
    const auto iso = test::random_isometry(spec, rng);
    const auto moved = test::apply_all(iso, spec, rec.immersion.points);
    const auto found = align_immersions(rec.immersion, moved);
    CHECK(found.residual < 1e-10);
    CHECK(found.form_preservation_error(spec) < 1e-10);
    CHECK((found.blocks[0].linear - iso.blocks[0].linear).norm() < 1e-9);
  }

  TEST_CASE("base node maps to the seed data") {
    const auto fb = generate_fixture("hyperbolic_slice", 17, 17);
    const NodeIndex base{3, 12};
    const auto rec = reconstruct(fb.dataset, base);
    const int k = fb.dataset.chart.index(base.iu, base.iv);
    const auto& x = rec.immersion.points[k];
    // The curved coordinates at the base are sign(c_i) xi_i / sqrt|c_i| in the seed frame.
    const auto res = factor_constraint_residual(x, fb.dataset.spec);
    CHECK(res[0] < 1e-14);
    CHECK(res[1] < 1e-14);
    CHECK(std::abs(x(0) - 1) < 1e-14);
    CHECK(std::abs(x(3) - 1) < 1e-14);
  }

  TEST_CASE("pushforward stays nondegenerate") {
    for (const char* name : {"helicoid", "diagonal", "geodesic_cylinder_s2xr"}) {
      CAPTURE(name);
      const auto fb = generate_fixture(name, 33, 33);
      const auto rec = reconstruct(fb.dataset);
      CHECK(min_pushforward_singular_value(rec.immersion, fb.dataset) == doctest::Approx(1).epsilon(5e-3));
    }
  }
}
