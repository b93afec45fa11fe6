#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mpsf {

struct NodeIndex {
  int iu = 0;
  int iv = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

// Block sizes of an ambient vector disagree with the multiproduct.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(int factor, const std::string& what)
      : std::invalid_argument(what), factor_(factor) {}
  int factor() const { return factor_; }

 private:
  int factor_;
};

// Input data violates a schema rule or a type invariant.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what,
                  std::optional<NodeIndex> node = std::nullopt)
      : std::runtime_error(what), field_(std::move(field)), node_(node) {}
  const std::string& field() const { return field_; }
  const std::optional<NodeIndex>& node() const { return node_; }

 private:
  std::string field_;
  std::optional<NodeIndex> node_;
};

// Point clouds too degenerate for a well-posed fit.
class DegenerateInput : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigenbundle of a projection has the wrong dimension at the base node.
class RankConditionError : public std::runtime_error {
 public:
  RankConditionError(int factor, int expected, int found, const std::string& what)
      : std::runtime_error(what), factor_(factor), expected_(expected), found_(found) {}
  int factor() const { return factor_; }
  int expected() const { return expected_; }
  int found() const { return found_; }

 private:
  int factor_, expected_, found_;
};

}  // namespace mpsf
