#pragma once

#include <vector>

#include "mpsf/errors.hpp"

namespace mpsf {

// Uniform 2D grid. A periodic direction stores its seam twice: node N-1 is the
// same point as node 0, so the period is (N-1)*h.
struct Chart {
  int nu = 5;
  int nv = 5;
  double hu = 1;
  double hv = 1;
  bool periodic_u = false;
  bool periodic_v = false;
  double u0 = 0;
  double v0 = 0;

  int num_nodes() const { return nu * nv; }
  int index(int iu, int iv) const { return iv * nu + iu; }
  NodeIndex node(int idx) const { return {idx % nu, idx / nu}; }
  double u(int iu) const { return u0 + iu * hu; }
  double v(int iv) const { return v0 + iv * hv; }
  int size(int dir) const { return dir == 0 ? nu : nv; }
  double spacing(int dir) const { return dir == 0 ? hu : hv; }
  bool periodic(int dir) const { return dir == 0 ? periodic_u : periodic_v; }

  // Distance >= width from every non-periodic edge.
  bool interior(int iu, int iv, int width) const {
    auto ok = [&](int i, int n, bool p) { return p || (i >= width && i <= n - 1 - width); };
    return ok(iu, nu, periodic_u) && ok(iv, nv, periodic_v);
  }

  friend bool operator==(const Chart&, const Chart&) = default;
};

// Throws ValidationError on sizes < 5 or non-positive spacings.
void validate_chart(const Chart& chart);

// Chart of nu x nv nodes spanning [u0, u1] x [v0, v1].
Chart make_chart(int nu, int nv, double u0, double u1, double v0, double v1, bool periodic_u = false,
                 bool periodic_v = false);

namespace fd {

// Index of the neighbour at offset k (|k| <= 2) along a direction; wraps across
// a duplicated seam on periodic directions.
inline int wrap(int i, int k, int n, bool periodic) {
  if (!periodic) return i + k;
  const int period = n - 1;
  return ((i + k) % period + period) % period;
}

// First derivative along dir at (iu, iv): central inside, second-order one-sided
// at non-periodic edges.
template <typename T>
T diff(const std::vector<T>& field, const Chart& c, int iu, int iv, int dir) {
  const int n = c.size(dir), i = dir == 0 ? iu : iv;
  const double h = c.spacing(dir);
  const bool p = c.periodic(dir);
  auto at = [&](int j) -> const T& { return dir == 0 ? field[c.index(j, iv)] : field[c.index(iu, j)]; };
  if (p || (i > 0 && i < n - 1)) {
    const int l = wrap(i, -1, n, p), r = wrap(i, 1, n, p);
    return ((at(r) - at(l)) / (2 * h)).eval();
  }
  if (i == 0) return ((-3 * at(0) + 4 * at(1) - at(2)) / (2 * h)).eval();
  return ((3 * at(n - 1) - 4 * at(n - 2) + at(n - 3)) / (2 * h)).eval();
}

// Second derivative along dir, second order everywhere.
template <typename T>
T diff2(const std::vector<T>& field, const Chart& c, int iu, int iv, int dir) {
  const int n = c.size(dir), i = dir == 0 ? iu : iv;
  const double h = c.spacing(dir);
  const bool p = c.periodic(dir);
  auto at = [&](int j) -> const T& { return dir == 0 ? field[c.index(j, iv)] : field[c.index(iu, j)]; };
  if (p || (i > 0 && i < n - 1)) {
    const int l = wrap(i, -1, n, p), r = wrap(i, 1, n, p);
    return ((at(r) - 2 * at(i) + at(l)) / (h * h)).eval();
  }
  if (i == 0) return ((2 * at(0) - 5 * at(1) + 4 * at(2) - at(3)) / (h * h)).eval();
  return ((2 * at(n - 1) - 5 * at(n - 2) + 4 * at(n - 3) - at(n - 4)) / (h * h)).eval();
}

template <typename T>
std::vector<T> diff_field(const std::vector<T>& field, const Chart& c, int dir) {
  std::vector<T> out(field.size());
  for (int iv = 0; iv < c.nv; ++iv)
    for (int iu = 0; iu < c.nu; ++iu) out[c.index(iu, iv)] = diff(field, c, iu, iv, dir);
  return out;
}

}  // namespace fd

}  // namespace mpsf
