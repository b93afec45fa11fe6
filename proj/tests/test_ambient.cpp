#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mpsf/ambient.hpp"
#include "mpsf/fixtures.hpp"
#include "support.hpp"

using namespace mpsf;

namespace {

Vector v3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

Vector stack(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

TEST_SUITE("ambient") {
  TEST_CASE("factor constraint residuals") {
    const MultiproductSpec sphere({{2, 1.0}});
    CHECK(factor_constraint_residual(v3(0, 0, 1), sphere)[0] == 0);
    CHECK(factor_constraint_residual(v3(2, 0, 0), sphere)[0] == doctest::Approx(3));

    const MultiproductSpec hyp({{3, -1.0}});
    Vector p(4);
    p << std::sqrt(2.0), 1, 0, 0;
    CHECK(factor_constraint_residual(p, hyp)[0] < 1e-15);

    const MultiproductSpec flat({{3, 0.0}});
    CHECK(factor_constraint_residual(v3(7, -2, 1), flat)[0] == 0);
  }

  TEST_CASE("wrong block size names the short factor") {
    const MultiproductSpec spec({{2, 1.0}, {2, 1.0}});
    Vector p = Vector::Zero(5);
    try {
      factor_constraint_residual(p, spec);
      FAIL("expected DimensionMismatch");
    } catch (const DimensionMismatch& e) {
      CHECK(e.factor() == 2);
    }
  }

  TEST_CASE("curvature tensor identities") {
    const MultiproductSpec flat({{3, 0.0}});
    CHECK(ambient_curvature(flat, v3(1, 2, 3), v3(0, 1, 0), v3(4, 0, 1)).norm() == 0);

    const MultiproductSpec sphere({{2, 1.0}});
    const Vector x = v3(1, 0, 0), y = v3(0, 1, 0);
    CHECK((ambient_curvature(sphere, x, y, y) - x).norm() < 1e-15);

    const MultiproductSpec prod({{2, 1.0}, {2, 1.0}});
    const Vector z3 = Vector::Zero(3);
    const Vector a = stack(v3(1, 2, 0), z3), b = stack(z3, v3(0, 1, 3)), c = stack(v3(1, 1, 1), v3(2, 0, 1));
    CHECK(ambient_curvature(prod, a, b, c).norm() == 0);

    // R(X,Y)Z = -R(Y,X)Z and <R(X,Y)Z, W> = -<R(X,Y)W, Z>, with random data.
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    auto rnd = [&] {
      Vector r(6);
      for (int i = 0; i < 6; ++i) r(i) = nd(rng);
      return r;
    };
    for (int trial = 0; trial < 20; ++trial) {
      const Vector X = rnd(), Y = rnd(), Z = rnd(), W = rnd();
      CHECK((ambient_curvature(prod, X, Y, Z) + ambient_curvature(prod, Y, X, Z)).norm() < 1e-12);
      CHECK(std::abs(ambient_curvature(prod, X, Y, Z).dot(W) + ambient_curvature(prod, X, Y, W).dot(Z)) < 1e-12);
    }
  }

  TEST_CASE("identity alignment and exact rotation recovery") {
    const auto fb = generate_fixture("slice", 9, 9);
    const auto& pts = fb.ground_truth.points;
    const auto& spec = fb.dataset.spec;
    AlignOptions opt;
    opt.allow_degenerate = true;
    const auto same = align_isometry(pts, pts, spec, opt);
    CHECK(same.residual < 1e-12);
    CHECK((same.blocks[0].linear - Matrix::Identity(3, 3)).norm() < 1e-12);

    const double a = std::numbers::pi / 3;
    Matrix rz = Matrix::Identity(3, 3);
    rz(0, 0) = rz(1, 1) = std::cos(a);
    rz(0, 1) = -std::sin(a);
    rz(1, 0) = std::sin(a);
    IsometryAlignment iso;
    iso.blocks = {{rz, Vector::Zero(3)}, {Matrix::Identity(3, 3), Vector::Zero(3)}};
    const auto moved = test::apply_all(iso, spec, pts);
    const auto found = align_isometry(pts, moved, spec, opt);
    CHECK(found.residual < 1e-10);
    CHECK((found.blocks[0].linear - rz).norm() < 1e-10);
  }

  TEST_CASE("random isometries are recovered on the fixtures") {
    std::mt19937 rng(2024);
    for (const char* name : {"diagonal", "clifford_torus", "helicoid", "round_sphere_in_r3", "hyperbolic_slice"}) {
      CAPTURE(name);
      const auto fb = generate_fixture(name, 17, 17);
      const auto& spec = fb.dataset.spec;
      const auto iso = test::random_isometry(spec, rng);
      const auto moved = test::apply_all(iso, spec, fb.ground_truth.points);
      AlignOptions opt;
      // Great circles and single points leave part of the map undetermined.
      opt.allow_degenerate = std::string(name) == "hyperbolic_slice" || std::string(name) == "clifford_torus";
      const auto found = align_isometry(fb.ground_truth.points, moved, spec, opt);
      CHECK(found.residual < 1e-9);
      CHECK(found.form_preservation_error(spec) < 1e-10);
    }
  }

  TEST_CASE("residuals are invariant under a common isometry") {
    const auto fb = generate_fixture("diagonal", 17, 17);
    const auto& spec = fb.dataset.spec;
    std::mt19937 rng(3);
    std::vector<AmbientPoint> noisy = fb.ground_truth.points;
    std::normal_distribution<double> nd(0, 1e-4);
    for (auto& p : noisy)
      for (int i = 0; i < p.size(); ++i) p(i) += nd(rng);
    const auto base = align_isometry(noisy, fb.ground_truth.points, spec);
    const auto iso = test::random_isometry(spec, rng);
    const auto moved = align_isometry(test::apply_all(iso, spec, noisy), test::apply_all(iso, spec, fb.ground_truth.points), spec);
    CHECK(std::abs(moved.residual - base.residual) < 1e-12);
  }

  TEST_CASE("clifford torus against its re-integrated copy") {
    std::vector<double> h, r;
    for (int n : {17, 33, 65}) {
      const auto fb = generate_fixture("clifford_torus", n, n);
      const auto rec = reconstruct(fb.dataset, &fb.ground_truth.points);
      h.push_back(test::grid_h(fb.dataset.chart));
      r.push_back(rec.alignment->residual);
    }
    // Parallel data: the integration is exact up to roundoff.
    CHECK(test::all_exact(r));
  }

  TEST_CASE("geodesic distance on each space form") {
    const MultiproductSpec spec({{2, 1.0}, {2, -1.0}, {2, 0.0}});
    Vector a = Vector::Zero(8), b = Vector::Zero(8);
    a.segment(0, 3) = v3(1, 0, 0);
    b.segment(0, 3) = v3(0, 1, 0);
    a.segment(3, 3) = v3(1, 0, 0);
    b.segment(3, 3) = v3(std::cosh(0.7), std::sinh(0.7), 0);
    a.segment(6, 2) << 0, 0;
    b.segment(6, 2) << 3, 4;
    CHECK(factor_geodesic_distance(spec, 0, a, b) == doctest::Approx(std::numbers::pi / 2));
    CHECK(factor_geodesic_distance(spec, 1, a, b) == doctest::Approx(0.7));
    CHECK(factor_geodesic_distance(spec, 2, a, b) == doctest::Approx(5));
  }
}
