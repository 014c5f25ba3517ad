#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bosonet/coherent.hpp"

namespace bosonet {

// Kernel in the Gaussian factor of the purity sums.
//  paper:   diag_n sum_{m in S} |Theta_mn(-t)|^2
//  adjoint: Theta_S(t)^+ Theta_S(t), Theta_S = rows of Theta(t) in S
// They agree when Theta is unitary and either S is the whole network or every
// label is confined to one oscillator. Under damping |Theta(-t)| grows, so
// EntropyKernel::paper departs from the exact purity.
enum class EntropyKernel { paper, adjoint };

std::string to_string(EntropyKernel k);
std::optional<EntropyKernel> entropy_kernel_from_string(const std::string& s);

// Tr[rho_S(t)^2] for the oscillators in `subset` (0-based).
double coherent_purity(const CoherentSuperposition& state, const DissipativeMatrix& dm, double t,
                       const std::vector<int>& subset, EntropyKernel kernel);

struct EntropyReport {
  double t = 0.0;
  int focus = 0;        // 0-based oscillator
  double s_full = 0.0;
  double s_single = 0.0;
  double s_rest = 0.0;  // 0 when N = 1
  double excess = 0.0;
  EntropyKernel kernel = EntropyKernel::adjoint;
  // Both kernels give the same three entropies within 1e-9.
  bool kernels_agree = true;
};

EntropyReport linear_entropies(const CoherentSuperposition& state, const DissipativeMatrix& dm,
                               double t, int focus, EntropyKernel kernel = EntropyKernel::adjoint);

}  // namespace bosonet
