#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "mpsf/fixtures.hpp"
#include "mpsf/flatconn.hpp"
#include "support.hpp"

using namespace mpsf;

namespace {

// Transport around the square [i0, i0 + s] x [j0, j0 + s] of grid nodes,
// counter-clockwise; returns the holonomy deviation |H - I|.
double holonomy(const GeometricDataset& ds, const ConnectionField& cf, int i0, int j0, int s) {
  const Chart& c = ds.chart;
  const int r = cf.bundle.rank();
  Matrix sigma = Matrix::Identity(r, r);
  int i = i0, j = j0;
  // One transport call per side so that each side uses its own direction's
  // coefficient at the corners.
  auto leg = [&](int di, int dj) {
    const int dir = di != 0 ? 0 : 1;
    const double h = dir == 0 ? c.hu : c.hv;
    std::vector<Matrix> om{cf.omega[dir][c.index(i, j)]};
    std::vector<double> steps;
    for (int k = 0; k < s; ++k) {
      i += di;
      j += dj;
      om.push_back(cf.omega[dir][c.index(i, j)]);
      steps.push_back(h * (di + dj));
    }
    sigma = parallel_transport(om, steps, sigma);
  };
  leg(1, 0);
  leg(0, 1);
  leg(-1, 0);
  leg(0, -1);
  return (sigma - Matrix::Identity(r, r)).norm();
}

}  // namespace

TEST_SUITE("flatconn") {
  TEST_CASE("coefficient blocks of the Clifford torus") {
    const auto ds = generate_fixture("clifford_torus", 17, 17).dataset;
    const auto cf = connection_field(ds);
    const int n = 2, d = 2, k = ds.chart.index(5, 7);
    for (int mu = 0; mu < 2; ++mu) {
      const Matrix& om = cf.omega[mu][k];
      CHECK(om.rows() == 6);
      // B = 0, flat chart metric and a parallel E frame: only TM <-> xi blocks survive.
      CHECK(om.topLeftCorner(n + d, n + d).norm() < 1e-12);
      for (int i = 0; i < 2; ++i) {
        const int x = n + d + i;
        Vector col = ds.f[i][k].col(mu);
        CHECK((om.block(0, x, n, 1) - col).norm() < 1e-14);
        CHECK((om.block(x, 0, 1, n).transpose() + ds.g[k] * col).norm() < 1e-14);
        CHECK(om.block(x, n, 1, d).norm() == 0);
      }
      // Metric compatibility: Omega^T G + G Omega = 0 for the constant Gram matrix G.
      const Matrix G = bundle_gram(ds, k);
      CHECK((om.transpose() * G + G * om).norm() < 1e-14);
    }
  }

  TEST_CASE("plane has a vanishing connection and curvature") {
    const auto ds = generate_fixture("plane", 17, 17).dataset;
    const auto cf = connection_field(ds);
    for (int k = 0; k < ds.num_nodes(); ++k) {
      CHECK(cf.omega[0][k].norm() == 0);
      CHECK(cf.omega[1][k].norm() == 0);
    }
    CHECK(max_curvature_residual(ds) == 0);
    const auto frame = build_parallel_frame(ds, {8, 8});
    for (const auto& s : frame.sections) CHECK((s - frame.sections[0]).norm() == 0);
  }

  TEST_CASE("slice has no coupling to the second factor line") {
    const auto ds = generate_fixture("slice", 17, 17).dataset;
    const auto cf = connection_field(ds);
    const int x2 = cf.bundle.xi_slot(1);
    REQUIRE(x2 >= 0);
    for (int mu = 0; mu < 2; ++mu)
      for (int k = 0; k < ds.num_nodes(); k += 11) {
        CHECK(cf.omega[mu][k].row(x2).norm() == 0);
        CHECK(cf.omega[mu][k].col(x2).norm() == 0);
      }
  }

  TEST_CASE("transport of zero and constant coefficients") {
    std::mt19937 rng(5);
    const Matrix sigma0 = test::random_orthogonal(4, rng);
    std::vector<Matrix> zero(6, Matrix::Zero(4, 4));
    std::vector<double> steps(5, 0.1);
    CHECK((parallel_transport(zero, steps, sigma0) - sigma0).norm() == 0);

    Matrix a(4, 4);
    a << 0, 1, -0.5, 0.2, -1, 0, 0.3, 0, 0.5, -0.3, 0, 0.7, -0.2, 0, -0.7, 0;
    for (auto scheme : {TransportScheme::magnus4, TransportScheme::rk4}) {
      // Local error is O(step^5): one step of length L, then halve it.
      double prev = 0;
      for (double L : {0.4, 0.2, 0.1}) {
        const Matrix exact = (-L * a).exp() * sigma0;
        const double e = (transport_step(a, a, L, sigma0, scheme) - exact).norm();
        if (prev > 0) CHECK(prev / e > 24);
        prev = e;
      }
      // Many steps along a segment of total length 1.
      std::vector<Matrix> om(21, a);
      std::vector<double> st(20, 0.05);
      CHECK((parallel_transport(om, st, sigma0) - (-a).exp() * sigma0).norm() < 1e-6);
    }
  }

  TEST_CASE("holonomy of a fixed loop shrinks like h^2") {
    std::vector<double> h, r;
    for (int n : {33, 65, 129}) {
      const auto ds = generate_fixture("round_sphere_in_r3", n, n).dataset;
      const auto cf = connection_field(ds);
      // Physical square [0.25, 0.75] x [-0.25, 0.25].
      const int q = (n - 1) / 4;
      h.push_back(test::grid_h(ds.chart));
      r.push_back(holonomy(ds, cf, q, q, 2 * q));
    }
    CHECK(r[2] < 1e-4);
    CHECK(test::converges(h, r, 1.8, 2.2));
  }

  TEST_CASE("sweep discrepancy and Gram drift") {
    std::vector<double> h, r;
    for (int n : {33, 65}) {
      const auto ds = generate_fixture("slice", n, n).dataset;
      const auto frame = build_parallel_frame(ds, default_base_node(ds.chart));
      h.push_back(test::grid_h(ds.chart));
      r.push_back(frame.sweep_discrepancy);
    }
    CHECK(test::order(h[0], r[0], h[1], r[1]) == doctest::Approx(2).epsilon(0.1));

    const auto ds = generate_fixture("diagonal", 64, 64).dataset;
    const auto frame = build_parallel_frame(ds, {10, 50});
    CHECK(frame.gram_drift < 1e-10);
    CHECK(frame.eigenbundle_drift < 1e-3);
  }

  TEST_CASE("curvature residual: exact on parallel data, second order otherwise") {
    CHECK(max_curvature_residual(generate_fixture("clifford_torus", 33, 33).dataset) < 1e-12);
    std::vector<double> h, r;
    for (int n : {33, 65}) {
      const auto ds = generate_fixture("diagonal", n, n).dataset;
      h.push_back(test::grid_h(ds.chart));
      r.push_back(max_curvature_residual(ds));
    }
    CHECK(test::order(h[0], r[0], h[1], r[1]) == doctest::Approx(2).epsilon(0.1));
  }

  TEST_CASE("rank condition at the base node") {
    auto ds = generate_fixture("slice", 9, 9).dataset;
    for (auto& f : ds.f[0]) f = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(build_parallel_frame(ds, {4, 4}), RankConditionError);
  }
}
