#include "bosonet/fock_basis.hpp"

#include <cmath>

namespace bosonet {

FockBasis::FockBasis(std::vector<int> levels) : levels_(std::move(levels)) {
  strides_.assign(levels_.size(), 1);
  dimension_ = 1;
  for (std::size_t k = levels_.size(); k-- > 0;) {
    if (levels_[k] < 1) throw ValidationError("cutoff: every oscillator needs at least one level");
    strides_[k] = dimension_;
    dimension_ *= static_cast<std::size_t>(levels_[k]);
  }
}

FockBasis FockBasis::uniform(int modes, int levels) {
  return FockBasis(std::vector<int>(static_cast<std::size_t>(modes), levels));
}

std::vector<int> FockBasis::occupations(std::size_t index) const {
  std::vector<int> occ(levels_.size());
  for (int m = 0; m < modes(); ++m) occ[static_cast<std::size_t>(m)] = occupation(index, m);
  return occ;
}

std::size_t FockBasis::index_of(const std::vector<int>& occupation) const {
  if (occupation.size() != levels_.size()) return dimension_;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (occupation[k] < 0 || occupation[k] >= levels_[k]) return dimension_;
    idx += strides_[k] * static_cast<std::size_t>(occupation[k]);
  }
  return idx;
}

RealMatrix FockBasis::annihilation(int mode) const {
  const auto dim = static_cast<Eigen::Index>(dimension_);
  RealMatrix a = RealMatrix::Zero(dim, dim);
  const auto step = static_cast<Eigen::Index>(stride(mode));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const int n = occupation(static_cast<std::size_t>(i), mode);
    if (n > 0) a(i - step, i) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

ComplexVector coherent_amplitudes(cplx alpha, int levels) {
  ComplexVector v(levels);
  const double norm = std::exp(-0.5 * std::norm(alpha));
  cplx term = norm;
  for (int n = 0; n < levels; ++n) {
    v(n) = term;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

ComplexVector coherent_product(const FockBasis& basis, const ComplexVector& alpha) {
  std::vector<ComplexVector> factors;
  for (int m = 0; m < basis.modes(); ++m)
    factors.push_back(coherent_amplitudes(alpha(m), basis.levels(m)));
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    cplx c = 1.0;
    for (int m = 0; m < basis.modes(); ++m)
      c *= factors[static_cast<std::size_t>(m)](basis.occupation(static_cast<std::size_t>(i), m));
    v(i) = c;
  }
  return v;
}

}  // namespace bosonet
