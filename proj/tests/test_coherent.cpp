#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bosonet/coherent.hpp"
#include "bosonet/dissipation.hpp"
#include "bosonet/fock_basis.hpp"
#include "bosonet/spectral.hpp"
#include "support/test_oracles.hpp"

using namespace bosonet;
using std::numbers::pi;

namespace {

ComplexVector vec(std::initializer_list<cplx> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (cplx x : xs) v(i++) = x;
  return v;
}

CoherentSuperposition cat(std::initializer_list<cplx> beta, cplx sign = 1.0) {
  const auto b = vec(beta);
  ComplexMatrix labels(2, b.size());
  labels.row(0) = b.transpose();
  labels.row(1) = -b.transpose();
  return normalize_superposition(vec({1.0, sign}), labels);
}

DissipativeMatrix two_mode(double omega, double lambda, double g1, double g2) {
  RealMatrix h(2, 2);
  h << omega, lambda, lambda, omega;
  RealMatrix g = RealMatrix::Zero(2, 2);
  g(0, 0) = g1;
  g(1, 1) = g2;
  return build_hd(h, g);
}

DissipativeMatrix one_mode(double omega, double gamma) {
  return build_hd(RealMatrix::Constant(1, 1, omega), RealMatrix::Constant(1, 1, gamma));
}

}  // namespace

TEST(CoherentOverlap, Examples) {
  EXPECT_LT(std::abs(coherent_overlap(vec({0.3 + 0.2 * kI}), vec({0.3 + 0.2 * kI})) - 1.0), 1e-15);
  EXPECT_NEAR(coherent_overlap(vec({0.0}), vec({1.5})).real(), std::exp(-1.125), 1e-15);
  EXPECT_NEAR(coherent_overlap(vec({1.0}), vec({-1.0})).real(), std::exp(-2.0), 1e-15);
}

TEST(CoherentOverlap, MatchesFockVectors) {
  const cplx a = 0.7 - 0.4 * kI;
  const cplx b = -0.2 + 0.9 * kI;
  const auto va = testing_support::coherent_vector(a, 60);
  const auto vb = testing_support::coherent_vector(b, 60);
  EXPECT_LT(std::abs(coherent_overlap(vec({a}), vec({b})) - va.dot(vb)), 1e-14);
}

TEST(Normalization, Examples) {
  ComplexMatrix one(1, 1);
  one(0, 0) = 0.8;
  EXPECT_NEAR(normalize_superposition(vec({1.0}), one).norm, 1.0, 1e-15);
  const double b = 1.3;
  EXPECT_NEAR(cat({b}).norm, 1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2.0 * b * b)), 1e-15);
  EXPECT_NEAR(cat({12.0}).norm, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Normalization, DegenerateStateIsRejected) {
  ComplexMatrix labels(2, 1);
  labels << 0.5, 0.5;
  EXPECT_THROW(normalize_superposition(vec({1.0, -1.0}), labels), ValidationError);
}

TEST(Evolution, SingleDampedOscillator) {
  const auto dm = one_mode(1.0, 0.2);
  ComplexMatrix labels(1, 1);
  labels(0, 0) = 1.0;
  const auto st = normalize_superposition(vec({1.0}), labels);
  for (double t : {0.0, 1.0, 7.5, 20.0}) {
    const auto ev = evolve_coherent(st, propagator(dm, t));
    EXPECT_LT(std::abs(ev.zeta(0, 0) - std::exp(-(0.1 + kI) * t)), 1e-14);
  }
}

TEST(Evolution, LosslessNormPreservation) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  RealMatrix h(3, 3);
  h << 1.0, 0.2, 0.1, 0.2, 1.1, 0.3, 0.1, 0.3, 0.9;
  const auto dm = build_hd(h, RealMatrix::Zero(3, 3));
  ComplexMatrix labels(2, 3);
  for (int r = 0; r < 2; ++r)
    for (int m = 0; m < 3; ++m) labels(r, m) = cplx(g(rng), g(rng));
  const auto st = normalize_superposition(vec({1.0, 0.5 * kI}), labels);
  const auto ev = evolve_coherent(st, propagator(dm, 13.0));
  for (int r = 0; r < 2; ++r) EXPECT_NEAR(ev.zeta.row(r).squaredNorm(), labels.row(r).squaredNorm(), 1e-10);
}

TEST(Evolution, TraceAndHermiticityOfWeights) {
  const auto dm = two_mode(1.0, 0.1, 0.1, 0.04);
  const auto st = cat({1.0, 0.5 * kI});
  for (double t : {0.0, 2.0, 30.0}) {
    const auto ev = evolve_coherent(st, propagator(dm, t));
    EXPECT_NEAR(coherent_trace(ev).real(), 1.0, 1e-12);
    EXPECT_NEAR(coherent_trace(ev).imag(), 0.0, 1e-12);
    EXPECT_LT((ev.weights - ev.weights.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Evolution, DensityMatrixMatchesFockConstruction) {
  // N=1 cat at t=0 built directly from Fock vectors.
  const double b = 0.9;
  const auto st = cat({b});
  const auto ev = evolve_coherent(st, propagator(one_mode(1.0, 0.1), 0.0));
  const FockBasis basis = FockBasis::uniform(1, 30);
  const ComplexMatrix rho = to_density_matrix(ev, basis);
  const Eigen::VectorXcd psi =
      st.norm * (testing_support::coherent_vector(b, 30) + testing_support::coherent_vector(-b, 30));
  EXPECT_LT((rho - psi * psi.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Reduction, KeepAllIsIdentity) {
  const auto dm = two_mode(1.0, 0.1, 0.05, 0.02);
  const auto ev = evolve_coherent(cat({1.0, 0.3}), propagator(dm, 4.0));
  const auto red = reduce_coherent(ev, {0, 1});
  EXPECT_LT((red.weights - ev.weights).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(red.zeta, ev.zeta);
}

TEST(Reduction, ProductBranchStaysPure) {
  const auto dm = two_mode(1.0, 0.1, 0.05, 0.02);
  ComplexMatrix labels(1, 2);
  labels << 0.7, 0.2 * kI;
  const auto st = normalize_superposition(vec({1.0}), labels);
  const auto ev = evolve_coherent(st, propagator(dm, 6.0));
  const auto red = reduce_coherent(ev, {1});
  EXPECT_NEAR(overlap_trace(red, red), 1.0, 1e-14);
}

TEST(Probabilities, RecurrenceAtZeroIsPurity) {
  const auto dm = two_mode(1.0, 0.1, 0.05, 0.02);
  const auto st = cat({1.0, 0.0});
  const auto ev = evolve_coherent(st, propagator(dm, 0.0));
  const auto red = reduce_coherent(ev, {0});
  EXPECT_NEAR(recurrence_probability(ev, 0), overlap_trace(red, red), 1e-15);
}

TEST(Probabilities, SingleBranchRecurrenceFormula) {
  const auto dm = two_mode(1.0, 0.1, 0.05, 0.02);
  ComplexMatrix labels(1, 2);
  labels << 1.2, 0.0;
  const auto st = normalize_superposition(vec({1.0}), labels);
  for (double t : {0.5, 3.0, 11.0}) {
    const auto p = propagator(dm, t);
    const auto ev = evolve_coherent(st, p);
    const double expected = std::exp(-1.44 * std::norm(1.0 - p.theta(0, 0)));
    EXPECT_NEAR(recurrence_probability(ev, 0), expected, 1e-14);
  }
}

TEST(Probabilities, TransferAtZeroIsVacuumOverlap) {
  const auto dm = two_mode(1.0, 0.1, 0.0, 0.0);
  ComplexMatrix labels(1, 2);
  labels << 0.8, 0.0;
  const auto ev = evolve_coherent(normalize_superposition(vec({1.0}), labels), propagator(dm, 0.0));
  EXPECT_NEAR(transfer_probability(ev, 0, 1), std::exp(-0.64), 1e-15);
}

TEST(Probabilities, PerfectTransfer) {
  // omega = 1.1 makes the phase of Theta_21 at t = pi/(2 lambda) exactly 1.
  const double lambda = 0.1;
  const auto dm = two_mode(1.1, lambda, 0.0, 0.0);
  ComplexMatrix labels(1, 2);
  labels << 1.0, 0.0;
  const auto st = normalize_superposition(vec({1.0}), labels);
  const auto ev = evolve_coherent(st, propagator(dm, pi / (2 * lambda)));
  EXPECT_GE(transfer_probability(ev, 0, 1), 1.0 - 1e-9);
}

TEST(Probabilities, DecoupledTransferIsConstant) {
  // Target starts in vacuum, which free rotation leaves alone.
  const auto dm = two_mode(1.0, 0.0, 0.0, 0.0);
  const auto st = cat({0.9, 0.0});
  const double p0 = transfer_probability(evolve_coherent(st, propagator(dm, 0.0)), 0, 1);
  for (double t : {1.0, 4.0, 9.0})
    EXPECT_NEAR(transfer_probability(evolve_coherent(st, propagator(dm, t)), 0, 1), p0, 1e-12);
}

TEST(Probabilities, GlobalPhaseInvariance) {
  const auto dm = two_mode(1.0, 0.1, 0.05, 0.02);
  const auto a = cat({1.0, 0.3 * kI});
  const cplx phase = std::exp(kI * 0.77);
  const auto b = normalize_superposition(a.amplitudes, a.labels * phase);
  for (double t : {0.0, 2.5, 8.0}) {
    const auto ea = evolve_coherent(a, propagator(dm, t));
    const auto eb = evolve_coherent(b, propagator(dm, t));
    EXPECT_NEAR(recurrence_probability(ea, 0), recurrence_probability(eb, 0), 1e-13);
    EXPECT_NEAR(transfer_probability(ea, 0, 1), transfer_probability(eb, 0, 1), 1e-13);
  }
}

TEST(Decoherence, UnitaryEvolutionKeepsUnitMagnitude) {
  const auto dm = two_mode(1.0, 0.1, 0.0, 0.0);
  const auto ev = evolve_coherent(cat({1.0, 0.5}), propagator(dm, 7.0));
  for (const auto& f : decoherence_coefficients(ev)) EXPECT_NEAR(f.magnitude, 1.0, 1e-12);
}

TEST(Decoherence, SingleOscillatorCatDecay) {
  const double b = 1.1;
  const double gamma = 0.2;
  const auto dm = one_mode(1.0, gamma);
  const auto st = cat({b});
  double previous = 2.0;
  for (double t : {0.0, 0.5, 2.0, 10.0, 40.0}) {
    const auto f = decoherence_coefficients(evolve_coherent(st, propagator(dm, t)));
    ASSERT_EQ(f.size(), 1u);
    const double expected = std::exp(-2.0 * b * b * (1.0 - std::exp(-gamma * t)));
    EXPECT_NEAR(f[0].magnitude, expected, 1e-12);
    EXPECT_LT(f[0].magnitude, previous);
    previous = f[0].magnitude;
  }
}

TEST(Continuum, PhaseIntegralProjectsOntoFockState) {
  // integral dtheta e^{-ik theta} |b e^{i theta}> is proportional to |k>.
  const int k = 2;
  const double b = 1.0;
  const auto st = discretize_continuum([&](double th) { return std::exp(-kI * (k * th)); },
                                       [&](double th) {
                                         ComplexVector v(1);
                                         v(0) = b * std::exp(kI * th);
                                         return v;
                                       },
                                       0.0, 2 * pi, 64, Quadrature::periodic_trapezoid);
  const auto ev = evolve_coherent(st, propagator(one_mode(1.0, 0.0), 0.0));
  const ComplexMatrix rho = to_density_matrix(ev, FockBasis::uniform(1, 12));
  EXPECT_NEAR(rho(k, k).real(), 1.0, 1e-10);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10);
}

TEST(Continuum, GaussLegendreIntegratesSmoothProfiles) {
  // A narrow-band phase profile: both rules must agree on the state.
  auto amp = [](double th) { return cplx(std::exp(-4.0 * (th - 1.0) * (th - 1.0))); };
  auto lab = [](double th) {
    ComplexVector v(1);
    v(0) = 0.8 * std::exp(kI * th);
    return v;
  };
  const auto gl = discretize_continuum(amp, lab, -2.0, 4.0, 64, Quadrature::gauss_legendre);
  const auto tr = discretize_continuum(amp, lab, -2.0, 4.0, 400, Quadrature::periodic_trapezoid);
  const FockBasis basis = FockBasis::uniform(1, 15);
  const auto dm = one_mode(1.0, 0.0);
  const ComplexMatrix a = to_density_matrix(evolve_coherent(gl, propagator(dm, 0.0)), basis);
  const ComplexMatrix c = to_density_matrix(evolve_coherent(tr, propagator(dm, 0.0)), basis);
  EXPECT_LT(testing_support::trace_distance(a, c), 1e-6);
}
