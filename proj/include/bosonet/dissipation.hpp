#pragma once

#include <string>
#include <vector>

#include "bosonet/damping_model.hpp"
#include "bosonet/spectral.hpp"
#include "bosonet/topology.hpp"

namespace bosonet {

enum class DampingProvenance { distinct, common };

struct DampingMatrix {
  RealMatrix gamma;
  DampingProvenance provenance = DampingProvenance::distinct;
};

// Where each oscillator's rate function is evaluated.
enum class RateEvaluation {
  normal_modes,    // gamma_m(varpi_n'), the general expression
  bare_frequency,  // gamma_m(omega_m) for every n' (weak-coupling limit)
};

// One model per oscillator; std::nullopt means no reservoir (gamma_m = 0).
using OscillatorModels = std::vector<std::optional<DampingModel>>;

// Gamma_mn = N sum_n' C_n'm gamma_m(varpi_n') C_n'n.
// Rows whose rate is frequency independent are filled analytically as
// N gamma_m delta_mn (orthogonality of C). `bare_omega` is only read for
// RateEvaluation::bare_frequency. Throws ModelError on a negative rate.
DampingMatrix gamma_distinct(const NormalModes& modes, const OscillatorModels& models,
                             RateEvaluation eval = RateEvaluation::normal_modes,
                             const RealVector& bare_omega = {});

// Correlation coefficients of a common reservoir, rho_mm = 1, 0 <= rho <= 1.
struct OverlapModel {
  RealMatrix rho;

  static OverlapModel identity(int n);
  static OverlapModel uniform(int n, double value);
  void validate() const;  // throws ValidationError
};

// Gamma_mn = N sum_{m',n'} xi_mm'(varpi_n') C_n'm' C_n'n with
// xi_mm'(w) = rho_mm' sqrt(gamma_m(w) gamma_m'(w)).
DampingMatrix gamma_common(const NormalModes& modes, const OscillatorModels& models,
                           const OverlapModel& overlap);

struct PsdReport {
  bool is_psd = true;
  double min_eigenvalue = 0.0;
};

// Eigenvalues of the symmetric part of gamma; is_psd iff min >= -tol.
PsdReport check_psd(const RealMatrix& gamma, double tol = 1e-10);

struct PreparedDamping {
  RealMatrix gamma;
  double asymmetry = 0.0;    // max |G - G^T| before symmetrization
  bool symmetrized = false;
};

// Symmetrizes (G + G^T)/2 when asymmetry exceeds `tol` and `symmetrize` is set.
PreparedDamping prepare_damping(const RealMatrix& gamma, bool symmetrize = true,
                                double tol = 1e-10);

// Per-oscillator model list resolved from the network's reservoir attachments.
OscillatorModels resolve_models(const NetworkSpec& spec);

struct NetworkMatrices {
  RealMatrix h;
  NormalModes modes;
  DampingMatrix raw_gamma;
  PreparedDamping damping;
  PsdReport psd;
};

struct DampingOptions {
  RateEvaluation evaluation = RateEvaluation::normal_modes;
  bool symmetrize = true;
  double symmetry_tol = 1e-10;
};

// H, normal modes and the damping matrix appropriate to the reservoir mode.
NetworkMatrices assemble(const NetworkSpec& spec, const DampingOptions& opts = {});

}  // namespace bosonet
