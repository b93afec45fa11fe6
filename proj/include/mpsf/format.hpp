#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace mpsf {

// Shortest-safe decimal form of a double: 17 significant digits, negative zero
// kept distinct so that text round trips are exact. Non-finite values map to
// the JSON-friendly tokens "nan", "inf", "-inf" (quoted by JSON writers).
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0 && std::signbit(x)) return "-0.0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON number, or a quoted token for non-finite values.
inline std::string json_number(double x) {
  if (std::isfinite(x)) return format_double(x);
  return "\"" + format_double(x) + "\"";
}

}  // namespace mpsf
