#pragma once

#include <functional>
#include <vector>

#include "bosonet/fock_basis.hpp"
#include "bosonet/spectral.hpp"
#include "bosonet/types.hpp"

namespace bosonet {

// log <alpha|beta> for product coherent states.
cplx log_coherent_overlap(const ComplexVector& alpha, const ComplexVector& beta);
// prod_m exp(-|a_m|^2/2 - |b_m|^2/2 + conj(a_m) b_m)
cplx coherent_overlap(const ComplexVector& alpha, const ComplexVector& beta);

// rho(0) = norm^2 sum_rs amp_r conj(amp_s) |beta^r><beta^s|.
struct CoherentSuperposition {
  ComplexVector amplitudes;  // Q entries
  ComplexMatrix labels;      // Q x N, row r = beta^r
  double norm = 1.0;

  int branches() const { return static_cast<int>(amplitudes.size()); }
  int oscillators() const { return static_cast<int>(labels.cols()); }
};

// Computes the normalization factor. Throws ValidationError when the state
// has (numerically) zero norm.
CoherentSuperposition normalize_superposition(ComplexVector amplitudes, ComplexMatrix labels);

// |psi> = norm * integral dtheta f(theta) |{beta_m(theta)}> discretized.
enum class Quadrature { gauss_legendre, periodic_trapezoid };
CoherentSuperposition discretize_continuum(
    const std::function<cplx(double)>& amplitude,
    const std::function<ComplexVector(double)>& labels, double theta_min, double theta_max,
    int nodes = 64, Quadrature rule = Quadrature::gauss_legendre);

// rho(t) = sum_rs w_rs |zeta^r><zeta^s| with zeta^r = Theta beta^r and
// w_rs = norm^2 amp_r conj(amp_s) <beta^s|beta^r> / <zeta^s|zeta^r>.
struct EvolvedCoherentState {
  double t = 0.0;
  CoherentSuperposition initial;
  ComplexMatrix theta;
  ComplexMatrix zeta;     // Q x N
  ComplexMatrix weights;  // Q x Q, w_rs
  std::vector<int> subset;  // oscillators (0-based) that zeta/weights refer to
};

EvolvedCoherentState evolve_coherent(const CoherentSuperposition& state, const Propagator& theta);

// Restricts to `keep` (0-based, ascending): numerator keeps the full-network
// beta overlap, the denominator uses only the kept zeta labels.
EvolvedCoherentState reduce_coherent(const EvolvedCoherentState& ev, const std::vector<int>& keep);

// Trace of sum_rs w_rs |zeta^r><zeta^s|.
cplx coherent_trace(const EvolvedCoherentState& ev);

// Density matrix in a truncated basis whose modes match ev.subset.
ComplexMatrix to_density_matrix(const EvolvedCoherentState& ev, const FockBasis& basis);

// <a_m^+ a_m> for every oscillator in ev.subset.
std::vector<double> mean_photons(const EvolvedCoherentState& ev);

// Tr[rho_a rho_b] for two coherent-branch states on the same modes.
double overlap_trace(const EvolvedCoherentState& a, const EvolvedCoherentState& b);

// P_R(t) = Tr[rho_m(t) rho_m(0)].
double recurrence_probability(const EvolvedCoherentState& ev, int m);
// P_T(t) = Tr[rho_target(t) rho_source(0)].
double transfer_probability(const EvolvedCoherentState& ev, int source, int target);

struct DecoherenceFactor {
  int r = 0;
  int s = 0;
  double magnitude = 1.0;  // |w_rs(t)| / |w_rs(0)|
  double real = 1.0;       // Re of <beta^r|beta^s> / <zeta^r|zeta^s>
};
std::vector<DecoherenceFactor> decoherence_coefficients(const EvolvedCoherentState& ev);

}  // namespace bosonet
