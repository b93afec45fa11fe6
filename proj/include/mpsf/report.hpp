#pragma once

#include <map>
#include <string>
#include <vector>

#include "mpsf/errors.hpp"

namespace mpsf {

// Max/mean of a nonnegative residual field over the nodes where it was sampled.
struct ResidualStat {
  double max = 0;
  double mean = 0;
  NodeIndex argmax;
  int count = 0;
  double tolerance = 0;

  // NaN never passes.
  bool pass() const { return max <= tolerance; }
};

class ResidualAccumulator {
 public:
  void add(double value, NodeIndex node);
  ResidualStat finish(double tolerance) const;

 private:
  double max_ = 0;
  double sum_ = 0;
  NodeIndex argmax_;
  int count_ = 0;
};

// Tolerances applied by compatibility_verdict and verify_immersion.
struct ToleranceProfile {
  std::string name = "default";
  double algebraic = 1e-10;
  double differential = 1e-2;
  double curvature = 1e-2;
  double verification = 1e-2;
  double rank_relative = 1e-8;
  int grid = 64;

  static ToleranceProfile standard();
  static ToleranceProfile strict();
  // Throws std::invalid_argument for names other than "default" and "strict".
  static ToleranceProfile from_name(const std::string& name);
};

struct CompatReport {
  std::map<std::string, ResidualStat> entries;

  bool pass() const;
  std::vector<std::string> failing() const;
  const ResidualStat& at(const std::string& name) const { return entries.at(name); }
  bool contains(const std::string& name) const { return entries.count(name) > 0; }
  void merge(const CompatReport& other);
  // Largest ratio max / tolerance over all entries.
  double worst_ratio() const;

  // {"<equation>": {"max", "mean", "argmax_node": [iu, iv], "tolerance", "pass"}, ...,
  //  "verdict": "pass" | "fail"}
  std::string to_json(int indent = 0) const;
};

}  // namespace mpsf
