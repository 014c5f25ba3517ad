#pragma once

#include <map>
#include <vector>

#include "bosonet/fock_basis.hpp"
#include "bosonet/oracle.hpp"
#include "bosonet/spectral.hpp"

namespace bosonet {

// |phi(0)> = sum C_{n_1..n_N} |n_1..n_N>.
struct FockSuperposition {
  int oscillators = 1;
  std::map<std::vector<int>, cplx> amplitudes;

  int max_total() const;
};

// Rescales to unit norm; throws ValidationError for empty or zero-norm input.
FockSuperposition normalize(FockSuperposition state);

struct FockEvolution {
  oracle::DensityMatrix state;
  double truncated_weight = 0.0;  // probability that fell outside the basis
};

// Evolves through the loss channel induced by Theta(t): each creation
// operator maps to a_n^+ -> sum_m Theta_mn a_m^+ + sum_e B_en c_e^+ with
// B^+B = 1 - Theta^+ Theta and the vacuum ancillas c_e traced out.
// Output basis has `levels` states per oscillator. Throws NumericalError
// when Theta is not a contraction, and when truncated weight exceeds
// `max_truncation`.
FockEvolution evolve_fock(const FockSuperposition& state, const Propagator& theta, int levels,
                          double max_truncation = 1e-6);

// Initial state as a density matrix in the same basis.
oracle::DensityMatrix fock_density(const FockSuperposition& state, int levels);

}  // namespace bosonet
