#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpsf/errors.hpp"

namespace mpsf::cli {

enum ExitCode : int { kPass = 0, kVerdictFail = 2, kInputInvalid = 3, kInternal = 4 };

struct RunConfig {
  std::string subcommand;  // check, integrate, family, s2xs2, fixtures
  std::optional<std::filesystem::path> input;
  std::filesystem::path out = ".";
  std::string profile = "default";
  std::optional<std::pair<int, int>> grid;
  std::vector<double> thetas;
  std::optional<NodeIndex> base;
  std::optional<std::string> fixture;
  std::set<std::string> exports = {"obj", "csv", "json"};
};

// "1.0,2,-3e-1" -> values; "64x48" -> (64, 48); "3,4" -> node. Throw
// std::invalid_argument on malformed text.
std::vector<double> parse_theta_list(const std::string& text);
std::pair<int, int> parse_grid(const std::string& text);
NodeIndex parse_base(const std::string& text);

// Runs one subcommand, writing artifacts under config.out and a short summary
// to `log`; errors go to `err`. Returns an ExitCode value.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

// Command-line front end.
int run(int argc, char** argv);

}  // namespace mpsf::cli
