#include "mpsf/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mpsf/format.hpp"

namespace mpsf {

void ResidualAccumulator::add(double value, NodeIndex node) {
  // A NaN residual wins over every finite one so that it cannot hide.
  if (count_ == 0 || value > max_ || (std::isnan(value) && !std::isnan(max_))) {
    max_ = value;
    argmax_ = node;
  }
  sum_ += value;
  ++count_;
}

ResidualStat ResidualAccumulator::finish(double tolerance) const {
  ResidualStat s;
  s.max = max_;
  s.mean = count_ ? sum_ / count_ : 0;
  s.argmax = argmax_;
  s.count = count_;
  s.tolerance = tolerance;
  return s;
}

ToleranceProfile ToleranceProfile::standard() { return {}; }

ToleranceProfile ToleranceProfile::strict() {
  ToleranceProfile p;
  p.name = "strict";
  p.differential = 1e-3;
  p.curvature = 1e-3;
  p.verification = 1e-3;
  p.grid = 256;
  return p;
}

ToleranceProfile ToleranceProfile::from_name(const std::string& name) {
  if (name == "default") return standard();
  if (name == "strict") return strict();
  throw std::invalid_argument("unknown tolerance profile '" + name + "'");
}

bool CompatReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second.pass(); });
}

std::vector<std::string> CompatReport::failing() const {
  std::vector<std::string> out;
  for (const auto& [name, stat] : entries)
    if (!stat.pass()) out.push_back(name);
  return out;
}

void CompatReport::merge(const CompatReport& other) {
  for (const auto& [name, stat] : other.entries) entries[name] = stat;
}

double CompatReport::worst_ratio() const {
  double r = 0;
  for (const auto& [name, stat] : entries) {
    if (stat.tolerance > 0)
      r = std::max(r, stat.max / stat.tolerance);
    else if (stat.max > 0)
      return INFINITY;
  }
  return r;
}

std::string CompatReport::to_json(int indent) const {
  const std::string pad(indent, ' ');
  std::ostringstream os;
  os << "{\n";
  for (const auto& [name, s] : entries) {
    os << pad << "  \"" << name << "\": {\"max\": " << json_number(s.max) << ", \"mean\": " << json_number(s.mean)
       << ", \"argmax_node\": [" << s.argmax.iu << ", " << s.argmax.iv << "], \"tolerance\": "
       << json_number(s.tolerance) << ", \"pass\": " << (s.pass() ? "true" : "false") << "},\n";
  }
  os << pad << "  \"verdict\": \"" << (pass() ? "pass" : "fail") << "\"\n" << pad << "}";
  return os.str();
}

}  // namespace mpsf
