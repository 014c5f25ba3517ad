#include "bosonet/fock.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace bosonet {

int FockSuperposition::max_total() const {
  int best = 0;
  for (const auto& [occ, amp] : amplitudes)
    if (amp != 0.0) best = std::max(best, std::accumulate(occ.begin(), occ.end(), 0));
  return best;
}

FockSuperposition normalize(FockSuperposition state) {
  if (state.oscillators < 1) throw ValidationError("fock: need at least one oscillator");
  if (state.amplitudes.empty()) throw ValidationError("terms: superposition is empty");
  double norm2 = 0.0;
  for (const auto& [occ, amp] : state.amplitudes) {
    if (static_cast<int>(occ.size()) != state.oscillators)
      throw ValidationError("terms: occupation tuple length does not match the network");
    for (int n : occ)
      if (n < 0) throw ValidationError("terms: occupations must be non-negative");
    norm2 += std::norm(amp);
  }
  if (!(norm2 > 0.0) || !std::isfinite(norm2))
    throw ValidationError("terms: superposition has zero norm");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& [occ, amp] : state.amplitudes) amp *= scale;
  return state;
}

namespace {

using Monomial = std::vector<int>;  // exponents of (x_1..x_N, y_1..y_E)
using Polynomial = std::map<Monomial, cplx>;

// p * sum_j coeff(j) z_j, dropping vanishing coefficients.
Polynomial times_linear(const Polynomial& p, const ComplexVector& coeff) {
  Polynomial out;
  for (const auto& [mono, c] : p)
    for (Eigen::Index j = 0; j < coeff.size(); ++j) {
      if (coeff(j) == 0.0) continue;
      Monomial next = mono;
      ++next[static_cast<std::size_t>(j)];
      out[next] += c * coeff(j);
    }
  return out;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

FockEvolution evolve_fock(const FockSuperposition& state, const Propagator& theta, int levels,
                          double max_truncation) {
  const int n = state.oscillators;
  const ComplexMatrix& th = theta.theta;
  if (th.rows() != n || th.cols() != n) throw ValidationError("propagator: size mismatch");
  if (levels < 1) throw ValidationError("cutoff: must be positive");

  // Environment amplitudes: B^+ B = 1 - Theta^+ Theta.
  const ComplexMatrix loss = ComplexMatrix::Identity(n, n) - th.adjoint() * th;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (loss + loss.adjoint()));
  const RealVector ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-10)
    throw NumericalError("propagator is not a contraction (damping matrix is not positive "
                         "semidefinite); the loss channel is undefined");
  const RealVector root = ev.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix b = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();

  // a_k^+ -> sum_j v(j, k) z_j with z = (system, environment)
  ComplexMatrix v(2 * n, n);
  v.topRows(n) = th;
  v.bottomRows(n) = b;
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index k = 0; k < v.cols(); ++k)
      if (std::abs(v(i, k)) < 1e-300) v(i, k) = 0.0;

  Polynomial psi;
  for (const auto& [occ, amp] : state.amplitudes) {
    if (amp == 0.0) continue;
    double denom = 1.0;
    for (int x : occ) denom *= factorial(x);
    Polynomial term{{Monomial(static_cast<std::size_t>(2 * n), 0), amp / std::sqrt(denom)}};
    for (int k = 0; k < n; ++k)
      for (int rep = 0; rep < occ[static_cast<std::size_t>(k)]; ++rep)
        term = times_linear(term, v.col(k));
    for (const auto& [mono, c] : term) psi[mono] += c;
  }

  // Group by environment occupation; amplitude of |mu, nu> is c sqrt(mu! nu!).
  const FockBasis basis = FockBasis::uniform(n, levels);
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  std::map<Monomial, ComplexVector> by_env;
  double total = 0.0, kept = 0.0;
  for (const auto& [mono, c] : psi) {
    Monomial sys(mono.begin(), mono.begin() + n);
    Monomial env(mono.begin() + n, mono.end());
    double weight = 1.0;
    for (int x : mono) weight *= factorial(x);
    const cplx amp = c * std::sqrt(weight);
    total += std::norm(amp);
    const std::size_t idx = basis.index_of(sys);
    if (idx == basis.dimension()) continue;
    kept += std::norm(amp);
    auto it = by_env.find(env);
    if (it == by_env.end()) it = by_env.emplace(env, ComplexVector::Zero(dim)).first;
    it->second(static_cast<Eigen::Index>(idx)) += amp;
  }

  FockEvolution out{{basis, ComplexMatrix::Zero(dim, dim)}, std::max(0.0, total - kept)};
  for (const auto& [env, vec] : by_env) out.state.rho += vec * vec.adjoint();
  if (out.truncated_weight > max_truncation)
    throw NumericalError("cutoff too small: truncated weight " +
                         std::to_string(out.truncated_weight) + " exceeds " +
                         std::to_string(max_truncation));
  return out;
}

oracle::DensityMatrix fock_density(const FockSuperposition& state, int levels) {
  const FockBasis basis = FockBasis::uniform(state.oscillators, levels);
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  for (const auto& [occ, amp] : state.amplitudes) {
    const std::size_t idx = basis.index_of(occ);
    if (idx == basis.dimension()) {
      if (amp != 0.0) throw NumericalError("cutoff too small for the initial Fock state");
      continue;
    }
    psi(static_cast<Eigen::Index>(idx)) += amp;
  }
  return {basis, psi * psi.adjoint()};
}

}  // namespace bosonet
