#include "mpsf/multiproduct.hpp"

#include <stdexcept>
#include <string>

namespace mpsf {

MultiproductSpec::MultiproductSpec(std::vector<SpaceFormFactor> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("multiproduct needs at least one factor");
  offsets_.assign(1, 0);
  for (int i = 0; i < num_factors(); ++i) {
    const auto& f = factors_[i];
    if (f.dim < 1)
      throw std::invalid_argument("factor " + std::to_string(i + 1) + ": dimension must be >= 1");
    if (f.curvature == 0 && i + 1 != num_factors())
      throw std::invalid_argument("factor " + std::to_string(i + 1) +
                                  ": only the last factor may be flat");
    offsets_.push_back(offsets_.back() + ambient_dim(i));
  }
}

int MultiproductSpec::num_curved() const {
  int k = 0;
  for (int i = 0; i < num_factors(); ++i) k += curved(i) ? 1 : 0;
  return k;
}

int MultiproductSpec::product_dim() const {
  int n = 0;
  for (const auto& f : factors_) n += f.dim;
  return n;
}

Vector MultiproductSpec::factor_signature(int i) const {
  Vector s = Vector::Ones(ambient_dim(i));
  if (factors_[i].curvature < 0) s(0) = -1;
  return s;
}

Vector MultiproductSpec::signature() const {
  Vector s(ambient_dim());
  for (int i = 0; i < num_factors(); ++i) s.segment(ambient_offset(i), ambient_dim(i)) = factor_signature(i);
  return s;
}

bool operator==(const MultiproductSpec& a, const MultiproductSpec& b) {
  if (a.num_factors() != b.num_factors()) return false;
  for (int i = 0; i < a.num_factors(); ++i)
    if (a.factors_[i].dim != b.factors_[i].dim || a.factors_[i].curvature != b.factors_[i].curvature)
      return false;
  return true;
}

}  // namespace mpsf
