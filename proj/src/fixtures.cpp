#include "mpsf/fixtures.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "mpsf/errors.hpp"

namespace mpsf {

namespace {

using std::cos;
using std::cosh;
using std::sin;
using std::sinh;

// Position, first and second derivatives, and a normal frame with its first
// derivatives, all as ambient coordinate vectors.
struct Jet {
  Vector x, xu, xv, xuu, xuv, xvv;
  std::vector<Vector> nu{}, nu_u{}, nu_v{};
};

struct Definition {
  MultiproductSpec spec;
  double u0, u1, v0, v1;
  bool periodic_u = false, periodic_v = false;
  std::function<Jet(double, double)> jet{};
  std::function<double(double, double)> gauss{};
  std::optional<std::array<double, 2>> kahler{};
};

Vector vec(std::initializer_list<double> xs) {
  Vector v(xs.size());
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Vector cat(const Vector& a, const Vector& b) {
  Vector v(a.size() + b.size());
  v << a, b;
  return v;
}

Vector zeros(int n) { return Vector::Zero(n); }

// Unit sphere in longitude/latitude coordinates and its derivatives.
struct SpherePatch {
  Vector s, su, sv, suu, suv, svv;
  Vector e1, e1u, e1v, e2, e2u, e2v;  // orthonormal frame (s_u/|s_u|, s_v)
  SpherePatch(double u, double v) {
    const double cu = cos(u), su_ = sin(u), cv = cos(v), sv_ = sin(v);
    s = vec({cv * cu, cv * su_, sv_});
    su = vec({-cv * su_, cv * cu, 0});
    sv = vec({-sv_ * cu, -sv_ * su_, cv});
    suu = vec({-cv * cu, -cv * su_, 0});
    suv = vec({sv_ * su_, -sv_ * cu, 0});
    svv = vec({-cv * cu, -cv * su_, -sv_});
    e1 = vec({-su_, cu, 0});
    e1u = vec({-cu, -su_, 0});
    e1v = zeros(3);
    e2 = sv;
    e2u = suv;
    e2v = svv;
  }
};

// Circle of geodesic curvature kappa on the unit sphere, arclength t.
struct Circle {
  double S, C;
  explicit Circle(double kappa) : S(1 / std::sqrt(1 + kappa * kappa)), C(kappa / std::sqrt(1 + kappa * kappa)) {}
  double period() const { return 2 * std::numbers::pi * S; }
  Vector a(double t) const { return vec({S * cos(t / S), S * sin(t / S), C}); }
  Vector da(double t) const { return vec({-sin(t / S), cos(t / S), 0}); }
  Vector dda(double t) const { return vec({-cos(t / S) / S, -sin(t / S) / S, 0}); }
  Vector n(double t) const { return vec({-C * cos(t / S), -C * sin(t / S), S}); }
  Vector dn(double t) const { return vec({C * sin(t / S) / S, -C * cos(t / S) / S, 0}); }
};

MultiproductSpec s2xs2() { return MultiproductSpec({{2, 1.0}, {2, 1.0}}); }
MultiproductSpec r3() { return MultiproductSpec({{3, 0.0}}); }

Definition slice() {
  Definition d{s2xs2(), 0, 1, -0.5, 0.5};
  d.jet = [](double u, double v) {
    const SpherePatch p(u, v);
    const Vector z = zeros(3);
    Jet j{cat(p.s, vec({0, 0, 1})), cat(p.su, z), cat(p.sv, z), cat(p.suu, z), cat(p.suv, z), cat(p.svv, z)};
    j.nu = {cat(z, vec({1, 0, 0})), cat(z, vec({0, 1, 0}))};
    j.nu_u = {zeros(6), zeros(6)};
    j.nu_v = {zeros(6), zeros(6)};
    return j;
  };
  d.gauss = [](double, double) { return 1.0; };
  d.kahler = std::array<double, 2>{1, 1};
  return d;
}

// {(x, -x)}: Lagrangian for J1 = (J, J) and complex for J2 = (J, -J).
Definition diagonal() {
  Definition d{s2xs2(), 0, 1, -0.5, 0.5};
  d.jet = [](double u, double v) {
    const SpherePatch p(u, v);
    const double r = 1 / std::sqrt(2.0);
    Jet j{cat(p.s, -p.s), cat(p.su, -p.su), cat(p.sv, -p.sv), cat(p.suu, -p.suu), cat(p.suv, -p.suv),
          cat(p.svv, -p.svv)};
    j.nu = {r * cat(p.e1, p.e1), r * cat(p.e2, p.e2)};
    j.nu_u = {r * cat(p.e1u, p.e1u), r * cat(p.e2u, p.e2u)};
    j.nu_v = {r * cat(p.e1v, p.e1v), r * cat(p.e2v, p.e2v)};
    return j;
  };
  d.gauss = [](double, double) { return 0.5; };
  d.kahler = std::array<double, 2>{0, 1};
  return d;
}

Definition product_of_curves(double k1, double k2) {
  const Circle a(k1), b(k2);
  Definition d{s2xs2(), 0, a.period(), 0, b.period(), true, true};
  d.jet = [a, b](double u, double v) {
    const Vector z = zeros(3);
    Jet j{cat(a.a(u), b.a(v)), cat(a.da(u), z), cat(z, b.da(v)), cat(a.dda(u), z), zeros(6), cat(z, b.dda(v))};
    j.nu = {cat(a.n(u), z), cat(z, b.n(v))};
    j.nu_u = {cat(a.dn(u), z), zeros(6)};
    j.nu_v = {zeros(6), cat(z, b.dn(v))};
    return j;
  };
  d.gauss = [](double, double) { return 0.0; };
  d.kahler = std::array<double, 2>{0, 0};
  return d;
}

Definition helicoid() {
  Definition d{r3(), -0.5, 0.5, -0.5, 0.5};
  d.jet = [](double u, double v) {
    const double cu = cos(u), su = sin(u), ch = cosh(v), sh = sinh(v);
    Jet j{vec({sh * cu, sh * su, u}),       vec({-sh * su, sh * cu, 1}),   vec({ch * cu, ch * su, 0}),
          vec({-sh * cu, -sh * su, 0}),     vec({-ch * su, ch * cu, 0}),   vec({sh * cu, sh * su, 0})};
    j.nu = {vec({-su / ch, cu / ch, -sh / ch})};
    j.nu_u = {vec({-cu / ch, -su / ch, 0})};
    j.nu_v = {vec({su * sh / (ch * ch), -cu * sh / (ch * ch), -1 / (ch * ch)})};
    return j;
  };
  d.gauss = [](double, double v) { return -1 / std::pow(cosh(v), 4); };
  return d;
}

Definition catenoid() {
  Definition d{r3(), -0.5, 0.5, -0.5, 0.5};
  d.jet = [](double u, double v) {
    const double cu = cos(u), su = sin(u), ch = cosh(v), sh = sinh(v);
    Jet j{vec({ch * cu, ch * su, v}),       vec({-ch * su, ch * cu, 0}),   vec({sh * cu, sh * su, 1}),
          vec({-ch * cu, -ch * su, 0}),     vec({-sh * su, sh * cu, 0}),   vec({ch * cu, ch * su, 0})};
    j.nu = {vec({cu / ch, su / ch, -sh / ch})};
    j.nu_u = {vec({-su / ch, cu / ch, 0})};
    j.nu_v = {vec({-cu * sh / (ch * ch), -su * sh / (ch * ch), -1 / (ch * ch)})};
    return j;
  };
  d.gauss = [](double, double v) { return -1 / std::pow(cosh(v), 4); };
  return d;
}

Definition plane() {
  Definition d{r3(), -0.5, 0.5, -0.5, 0.5};
  d.jet = [](double u, double v) {
    Jet j{vec({u, v, 0}), vec({1, 0, 0}), vec({0, 1, 0}), zeros(3), zeros(3), zeros(3)};
    j.nu = {vec({0, 0, 1})};
    j.nu_u = {zeros(3)};
    j.nu_v = {zeros(3)};
    return j;
  };
  d.gauss = [](double, double) { return 0.0; };
  return d;
}

Definition round_sphere() {
  Definition d{r3(), 0, 1, -0.5, 0.5};
  d.jet = [](double u, double v) {
    const SpherePatch p(u, v);
    Jet j{p.s, p.su, p.sv, p.suu, p.suv, p.svv};
    j.nu = {p.s};
    j.nu_u = {p.su};
    j.nu_v = {p.sv};
    return j;
  };
  d.gauss = [](double, double) { return 1.0; };
  return d;
}

// ((cos u, sin u, 0), v + u/2) in S2 x R: a geodesic of S2 times a line, in a
// sheared chart so that f_1 is not diagonal.
Definition geodesic_cylinder() {
  Definition d{MultiproductSpec({{2, 1.0}, {1, 0.0}}), 0, 1, -0.5, 0.5};
  d.jet = [](double u, double v) {
    const double cu = cos(u), su = sin(u);
    Jet j{vec({cu, su, 0, v + 0.5 * u}), vec({-su, cu, 0, 0.5}), vec({0, 0, 0, 1}),
          vec({-cu, -su, 0, 0}), zeros(4), zeros(4)};
    j.nu = {vec({0, 0, 1, 0})};
    j.nu_u = {zeros(4)};
    j.nu_v = {zeros(4)};
    return j;
  };
  d.gauss = [](double, double) { return 0.0; };
  return d;
}

// H2 x {e3} in H2 x S2, hyperboloid model with the timelike axis first.
Definition hyperbolic_slice() {
  Definition d{MultiproductSpec({{2, -1.0}, {2, 1.0}}), -0.5, 0.5, -0.5, 0.5};
  d.jet = [](double u, double v) {
    const double chu = cosh(u), shu = sinh(u), chv = cosh(v), shv = sinh(v);
    const Vector z = zeros(3);
    Jet j{cat(vec({chv * chu, chv * shu, shv}), vec({0, 0, 1})),
          cat(vec({chv * shu, chv * chu, 0}), z),
          cat(vec({shv * chu, shv * shu, chv}), z),
          cat(vec({chv * chu, chv * shu, 0}), z),
          cat(vec({shv * shu, shv * chu, 0}), z),
          cat(vec({chv * chu, chv * shu, shv}), z)};
    j.nu = {cat(z, vec({1, 0, 0})), cat(z, vec({0, 1, 0}))};
    j.nu_u = {zeros(6), zeros(6)};
    j.nu_v = {zeros(6), zeros(6)};
    return j;
  };
  d.gauss = [](double, double) { return -1.0; };
  return d;
}

// Splits "name(a,b)" into its base name and numeric arguments.
std::pair<std::string, std::vector<double>> parse_name(const std::string& full) {
  const auto open = full.find('(');
  if (open == std::string::npos) return {full, {}};
  if (full.back() != ')') throw std::invalid_argument("malformed fixture name '" + full + "'");
  std::vector<double> args;
  std::stringstream ss(full.substr(open + 1, full.size() - open - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      args.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed fixture argument in '" + full + "'");
    }
  }
  return {full.substr(0, open), args};
}

Definition lookup(const std::string& full) {
  const auto [name, args] = parse_name(full);
  auto no_args = [&, &args = args] {
    if (!args.empty()) throw std::invalid_argument("fixture '" + name + "' takes no arguments");
  };
  if (name == "product_of_curves") {
    if (args.empty()) return product_of_curves(0.5, 1.0);
    if (args.size() != 2) throw std::invalid_argument("product_of_curves takes two curvatures");
    return product_of_curves(args[0], args[1]);
  }
  no_args();
  if (name == "slice") return slice();
  if (name == "diagonal") return diagonal();
  if (name == "clifford_torus") return product_of_curves(0, 0);
  if (name == "helicoid") return helicoid();
  if (name == "catenoid") return catenoid();
  if (name == "plane") return plane();
  if (name == "round_sphere_in_r3") return round_sphere();
  if (name == "geodesic_cylinder_s2xr") return geodesic_cylinder();
  if (name == "hyperbolic_slice") return hyperbolic_slice();
  throw std::invalid_argument("unknown fixture '" + full + "'");
}

}  // namespace

std::vector<FixtureInfo> list_fixtures() {
  std::vector<FixtureInfo> out;
  for (const char* name : {"slice", "diagonal", "clifford_torus", "product_of_curves", "helicoid", "catenoid", "plane",
                           "round_sphere_in_r3", "geodesic_cylinder_s2xr", "hyperbolic_slice"}) {
    const Definition d = lookup(name);
    out.push_back({name, d.spec, d.periodic_u, d.periodic_v});
  }
  return out;
}

Chart default_fixture_chart(const std::string& name, int nu, int nv) {
  const Definition d = lookup(name);
  return make_chart(nu, nv, d.u0, d.u1, d.v0, d.v1, d.periodic_u, d.periodic_v);
}

FixtureBundle generate_fixture(const std::string& name, int nu, int nv) {
  return generate_fixture(name, default_fixture_chart(name, nu, nv));
}

FixtureBundle generate_fixture(const std::string& name, const Chart& chart) {
  const Definition def = lookup(name);
  validate_chart(chart);
  auto check_period = [&](bool chart_periodic, bool fixture_periodic, double span, double period, const char* dir) {
    if (!chart_periodic) return;
    if (!fixture_periodic || std::abs(span - period) > 1e-9 * std::max(1.0, period))
      throw ValidationError("chart", std::string("fixture '") + name + "' is not periodic with the chart's " + dir +
                                         " span");
  };
  check_period(chart.periodic_u, def.periodic_u, (chart.nu - 1) * chart.hu, def.u1 - def.u0, "u");
  check_period(chart.periodic_v, def.periodic_v, (chart.nv - 1) * chart.hv, def.v1 - def.v0, "v");

  const MultiproductSpec& spec = def.spec;
  const int m = spec.num_factors(), nodes = chart.num_nodes();
  const int d = spec.product_dim() - 2;

  FixtureBundle fb;
  fb.name = name;
  GeometricDataset& ds = fb.dataset;
  ds.spec = spec;
  ds.chart = chart;
  ds.base_dim = 2;
  ds.bundle_rank = d;
  ds.g.resize(nodes);
  ds.B.resize(nodes);
  ds.conn_u.resize(nodes);
  ds.conn_v.resize(nodes);
  ds.f.assign(m, std::vector<Matrix>(nodes));
  ds.h.assign(m, std::vector<Matrix>(nodes));
  ds.t.assign(m, std::vector<Matrix>(nodes));
  ImmersionField& gt = fb.ground_truth;
  gt.spec = spec;
  gt.chart = chart;
  gt.points.resize(nodes);
  gt.push[0].resize(nodes);
  gt.push[1].resize(nodes);
  gt.normals.resize(nodes);
  fb.gauss_curvature.resize(nodes);
  fb.second_form_norm2.resize(nodes);
  fb.kahler = def.kahler;

  auto ip = [&](const Vector& a, const Vector& b) { return ambient_inner(spec, a, b); };
  for (int iv = 0; iv < chart.nv; ++iv)
    for (int iu = 0; iu < chart.nu; ++iu) {
      // Seam nodes reuse the samples of the opposite edge so that periodic data match exactly.
      const int su = chart.periodic_u && iu == chart.nu - 1 ? 0 : iu;
      const int sv = chart.periodic_v && iv == chart.nv - 1 ? 0 : iv;
      const double u = chart.u(su), v = chart.v(sv);
      const Jet j = def.jet(u, v);
      const int k = chart.index(iu, iv);
      const std::array<const Vector*, 2> xd = {&j.xu, &j.xv};
      const Vector* xdd[2][2] = {{&j.xuu, &j.xuv}, {&j.xuv, &j.xvv}};
      const std::array<const std::vector<Vector>*, 2> nd = {&j.nu_u, &j.nu_v};

      Matrix g(2, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) g(a, b) = ip(*xd[a], *xd[b]);
      ds.g[k] = g;
      ds.B[k].resize(d);
      for (int a = 0; a < d; ++a) {
        Matrix b(2, 2);
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q) b(p, q) = ip(*xdd[p][q], j.nu[a]);
        ds.B[k][a] = (b + b.transpose()) / 2;
      }
      for (int mu = 0; mu < 2; ++mu) {
        Matrix w(d, d);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) w(a, b) = ip((*nd[mu])[b], j.nu[a]);
        (mu == 0 ? ds.conn_u : ds.conn_v)[k] = (w - w.transpose()) / 2;
      }
      const Matrix ginv = g.inverse();
      for (int i = 0; i < m; ++i) {
        Matrix gi(2, 2), h(d, 2), t(d, d);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) gi(a, b) = factor_inner(spec, i, *xd[a], *xd[b]);
        for (int a = 0; a < d; ++a) {
          for (int c = 0; c < 2; ++c) h(a, c) = factor_inner(spec, i, *xd[c], j.nu[a]);
          for (int b = 0; b < d; ++b) t(a, b) = factor_inner(spec, i, j.nu[b], j.nu[a]);
        }
        ds.f[i][k] = ginv * gi;
        ds.h[i][k] = h;
        ds.t[i][k] = (t + t.transpose()) / 2;
      }

      gt.points[k] = j.x;
      gt.push[0][k] = j.xu;
      gt.push[1][k] = j.xv;
      gt.normals[k] = j.nu;
      fb.gauss_curvature[k] = def.gauss(u, v);
      double b2 = 0;
      for (int a = 0; a < d; ++a) b2 += (ginv * ds.B[k][a] * ginv * ds.B[k][a]).trace();
      fb.second_form_norm2[k] = b2;
    }
  validate_dataset(ds);
  return fb;
}

}  // namespace mpsf
