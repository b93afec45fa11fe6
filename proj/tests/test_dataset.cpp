#include <doctest.h>

#include <json.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mpsf/dataset.hpp"
#include "mpsf/dataset_io.hpp"
#include "mpsf/fixtures.hpp"
#include "support.hpp"

using namespace mpsf;
using nlohmann::json;

TEST_SUITE("dataset") {
  TEST_CASE("slice document loads with the expected operators") {
    const auto fb = generate_fixture("slice", 9, 9);
    const auto ds = parse_dataset(dataset_to_json(fb.dataset));
    CHECK(ds.base_dim == 2);
    CHECK(ds.bundle_rank == 2);
    for (int k = 0; k < ds.num_nodes(); ++k) {
      CHECK((ds.f[0][k] - Matrix::Identity(2, 2)).norm() < 1e-15);
      CHECK(ds.h[0][k].norm() == 0);
      CHECK(ds.h[1][k].norm() == 0);
    }
  }

  TEST_CASE("non-symmetric B is reported with field and node") {
    auto ds = generate_fixture("slice", 9, 9).dataset;
    ds.B[ds.chart.index(3, 4)][1](0, 1) = 0.25;
    const std::string text = dataset_to_json(ds);
    try {
      parse_dataset(text);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "B");
      REQUIRE(e.node().has_value());
      CHECK(*e.node() == NodeIndex{3, 4});
    }
  }

  TEST_CASE("dimension bookkeeping is enforced") {
    json doc = json::parse(dataset_to_json(generate_fixture("slice", 9, 9).dataset));
    doc["factors"][1]["dim"] = 1;
    CHECK_THROWS_AS(parse_dataset(doc.dump()), ValidationError);
    try {
      parse_dataset(doc.dump());
    } catch (const ValidationError& e) {
      CHECK(e.field() == "factors");
    }
  }

  TEST_CASE("malformed documents and missing files") {
    CHECK_THROWS_AS(parse_dataset("{not json"), ValidationError);
    CHECK_THROWS_AS(parse_dataset("[1, 2]"), ValidationError);
    CHECK_THROWS_AS(load_dataset("/nonexistent/dir/ds.json"), std::runtime_error);
  }

  TEST_CASE("adjoint s") {
    const Matrix g = Matrix::Identity(2, 2);
    CHECK(derive_adjoint_s(g, Matrix::Zero(2, 2)).norm() == 0);
    Matrix h(3, 2);
    h << 1, 2, -3, 4, 0.5, 7;
    CHECK((derive_adjoint_s(g, h) - h.transpose()).norm() < 1e-15);

    // A general metric: g(X, s xi) = <h X, xi> for all X, xi.
    Matrix gm(2, 2);
    gm << 2, 0.3, 0.3, 1.5;
    const Matrix s = derive_adjoint_s(gm, h);
    std::mt19937 rng(1);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
      Vector x(2), xi(3);
      for (int i = 0; i < 2; ++i) x(i) = nd(rng);
      for (int i = 0; i < 3; ++i) xi(i) = nd(rng);
      CHECK(std::abs(x.dot(gm * s * xi) - (h * x).dot(xi)) < 1e-12);
    }
    CHECK((derive_adjoint_h(gm, s) - h).norm() < 1e-12);
  }

  TEST_CASE("diagonal surface: h e_a = nu_a / 2 gives s nu_a = e_a / 2") {
    const auto fb = generate_fixture("diagonal", 17, 17);
    const auto& ds = fb.dataset;
    const int k = ds.chart.index(8, 8);
    const Matrix L = metric_factor(ds.g[k]);
    const Matrix pt = L.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(2, 2));  // columns e_a
    // h in orthonormal frames is h * P; s in orthonormal frames is P^{-1} s.
    const Matrix h_hat = ds.h[0][k] * pt;
    const Matrix s_hat = L.transpose() * derive_adjoint_s(ds, k, 0);
    CHECK((h_hat.cwiseAbs() - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((s_hat - h_hat.transpose()).norm() < 1e-12);
    CHECK((ds.t[0][k] - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-12);
  }

  TEST_CASE("shape operator") {
    const Matrix g = Matrix::Identity(2, 2);
    const std::vector<Matrix> zero = {Matrix::Zero(2, 2)};
    Vector xi(1);
    xi << 1;
    CHECK(shape_operator(zero, xi, g).norm() == 0);

    const auto fb = generate_fixture("helicoid", 17, 17);
    const int axis = fb.dataset.chart.index(8, 8);  // v = 0
    CHECK(std::abs(fb.dataset.chart.v(8)) < 1e-15);
    const Matrix a = shape_operator(fb.dataset.B[axis], xi, fb.dataset.g[axis]);
    Eigen::EigenSolver<Matrix> es(a);
    std::vector<double> ev = {es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
    std::sort(ev.begin(), ev.end());
    CHECK(ev[0] == doctest::Approx(-1).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1).epsilon(1e-12));
    Vector zx = Vector::Zero(1);
    CHECK(shape_operator(fb.dataset.B[axis], zx, fb.dataset.g[axis]).norm() == 0);
  }

  TEST_CASE("christoffels of constant, polar and spherical metrics") {
    {
      const Chart c = make_chart(9, 9, 0, 1, 0, 1);
      std::vector<Matrix> g(c.num_nodes(), Matrix::Identity(2, 2) * 3);
      const auto gam = christoffels(c, g, 4, 4);
      CHECK(gam[0].norm() == 0);
      CHECK(gam[1].norm() == 0);
    }
    auto polar_error = [](int n) {
      const Chart c = make_chart(n, n, 1, 2, 0, 1);
      std::vector<Matrix> g(c.num_nodes());
      for (int k = 0; k < c.num_nodes(); ++k) {
        const double u = c.u(c.node(k).iu);
        g[k] = Matrix::Identity(2, 2);
        g[k](1, 1) = u * u;
      }
      const auto field = christoffel_field(c, g);
      double e = 0;
      for (int k = 0; k < c.num_nodes(); ++k) {
        const double u = c.u(c.node(k).iu);
        e = std::max(e, std::abs(field[k][1](0, 1) + u));      // Gamma^1_22 = -u
        e = std::max(e, std::abs(field[k][0](1, 1) - 1 / u));  // Gamma^2_12 = 1/u
        e = std::max(e, std::abs(field[k][1](1, 0) - 1 / u));  // Gamma^2_21
      }
      return e;
    };
    // g_22 = u^2 is quadratic, so second-order differences reproduce it exactly.
    CHECK(polar_error(17) < 1e-12);
    CHECK(polar_error(33) < 1e-12);

    auto sphere_error = [](int n) {
      const Chart c = make_chart(n, n, 0.4, 1.4, 0, 1);
      std::vector<Matrix> g(c.num_nodes());
      for (int k = 0; k < c.num_nodes(); ++k) {
        const double th = c.u(c.node(k).iu);
        g[k] = Matrix::Identity(2, 2);
        g[k](1, 1) = std::sin(th) * std::sin(th);
      }
      const auto field = christoffel_field(c, g);
      double e = 0;
      for (int k = 0; k < c.num_nodes(); ++k) {
        const double th = c.u(c.node(k).iu);
        e = std::max(e, std::abs(field[k][1](0, 1) + std::sin(th) * std::cos(th)));
        e = std::max(e, std::abs(field[k][0](1, 1) - std::cos(th) / std::sin(th)));
      }
      return e;
    };
    const double s1 = sphere_error(17), s2 = sphere_error(33);
    CHECK(test::order(1.0 / 16, s1, 1.0 / 32, s2) == doctest::Approx(2).epsilon(0.15));
  }

  TEST_CASE("serialization round trip is exact") {
    for (const char* name : {"diagonal", "helicoid", "hyperbolic_slice", "geodesic_cylinder_s2xr"}) {
      CAPTURE(name);
      const auto ds = generate_fixture(name, 11, 13).dataset;
      const std::string text = dataset_to_json(ds);
      const auto back = parse_dataset(text);
      CHECK(back == ds);
      CHECK(dataset_to_json(back) == text);
    }
  }

  TEST_CASE("normal frame change keeps the data valid") {
    const auto ds = generate_fixture("diagonal", 11, 11).dataset;
    Matrix q(2, 2);
    q << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
    const auto moved = transform_normal_frame(ds, q);
    CHECK_NOTHROW(validate_dataset(moved));
    const auto back = transform_normal_frame(moved, q.transpose());
    for (int k = 0; k < ds.num_nodes(); ++k) CHECK((back.t[0][k] - ds.t[0][k]).norm() < 1e-14);
  }
}
