#pragma once

#include <vector>

#include "mpsf/linalg.hpp"

namespace mpsf {

// Simply connected real space form of dimension `dim` and curvature `curvature`.
struct SpaceFormFactor {
  int dim = 1;
  double curvature = 0;
};

// Ordered product M_1 x ... x M_m, together with its standard embedding in
// E_1 x ... x E_m: a sphere of radius 1/sqrt(c) in R^{n+1} for c > 0, the upper
// hyperboloid sheet <x,x> = 1/c in Minkowski R^{1,n} for c < 0, and R^n for c = 0.
// Only the last factor may be flat.
class MultiproductSpec {
 public:
  MultiproductSpec() = default;
  explicit MultiproductSpec(std::vector<SpaceFormFactor> factors);

  const std::vector<SpaceFormFactor>& factors() const { return factors_; }
  const SpaceFormFactor& factor(int i) const { return factors_[i]; }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  bool curved(int i) const { return factors_[i].curvature != 0; }
  int num_curved() const;

  int ambient_dim(int i) const { return factors_[i].dim + (curved(i) ? 1 : 0); }
  int ambient_offset(int i) const { return offsets_[i]; }
  int ambient_dim() const { return offsets_.empty() ? 0 : offsets_.back(); }
  // Sum of the factor dimensions, i.e. dim of the product manifold.
  int product_dim() const;

  // +1/-1 per ambient axis; the first axis of a factor with c < 0 is timelike.
  Vector signature() const;
  Vector factor_signature(int i) const;

  friend bool operator==(const MultiproductSpec& a, const MultiproductSpec& b);

 private:
  std::vector<SpaceFormFactor> factors_;
  std::vector<int> offsets_;  // size m + 1
};

}  // namespace mpsf
