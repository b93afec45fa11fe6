#include "mpsf/chart.hpp"

#include <cmath>
#include <string>

namespace mpsf {

void validate_chart(const Chart& c) {
  if (c.nu < 5 || c.nv < 5)
    throw ValidationError("chart", "grid must have at least 5 nodes per direction, got " +
                                       std::to_string(c.nu) + "x" + std::to_string(c.nv));
  if (!(c.hu > 0) || !(c.hv > 0) || !std::isfinite(c.hu) || !std::isfinite(c.hv))
    throw ValidationError("chart", "grid spacings must be positive and finite");
  if (!std::isfinite(c.u0) || !std::isfinite(c.v0)) throw ValidationError("chart", "chart origin must be finite");
}

Chart make_chart(int nu, int nv, double u0, double u1, double v0, double v1, bool periodic_u, bool periodic_v) {
  Chart c;
  c.nu = nu;
  c.nv = nv;
  c.hu = (u1 - u0) / (nu - 1);
  c.hv = (v1 - v0) / (nv - 1);
  c.u0 = u0;
  c.v0 = v0;
  c.periodic_u = periodic_u;
  c.periodic_v = periodic_v;
  validate_chart(c);
  return c;
}

}  // namespace mpsf
