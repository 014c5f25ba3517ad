#pragma once

#include <cstddef>
#include <vector>

#include "bosonet/types.hpp"

namespace bosonet {

// Truncated product basis |n_1, ..., n_N>, n_m in [0, levels[m]).
// Ordering is lexicographic with oscillator 1 most significant.
class FockBasis {
 public:
  FockBasis() = default;
  explicit FockBasis(std::vector<int> levels);
  static FockBasis uniform(int modes, int levels);

  int modes() const { return static_cast<int>(levels_.size()); }
  int levels(int mode) const { return levels_[static_cast<std::size_t>(mode)]; }
  const std::vector<int>& levels() const { return levels_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t stride(int mode) const { return strides_[static_cast<std::size_t>(mode)]; }

  // Occupation of `mode` in basis state `index`.
  int occupation(std::size_t index, int mode) const {
    return static_cast<int>((index / strides_[static_cast<std::size_t>(mode)]) %
                            static_cast<std::size_t>(levels_[static_cast<std::size_t>(mode)]));
  }
  std::vector<int> occupations(std::size_t index) const;
  // Returns dimension() if some n_m is outside the truncation.
  std::size_t index_of(const std::vector<int>& occupation) const;

  // Truncated annihilation operator of `mode` as a dense matrix.
  RealMatrix annihilation(int mode) const;

  bool operator==(const FockBasis&) const = default;

 private:
  std::vector<int> levels_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 0;
};

// Coefficients of |alpha> in a single-mode basis of `levels` states.
ComplexVector coherent_amplitudes(cplx alpha, int levels);

// Product coherent state in `basis` (not renormalized after truncation).
ComplexVector coherent_product(const FockBasis& basis, const ComplexVector& alpha);

}  // namespace bosonet
