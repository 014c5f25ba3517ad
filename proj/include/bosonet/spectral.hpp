#pragma once

#include <vector>

#include "bosonet/types.hpp"

namespace bosonet {

struct SpectralTolerances {
  double degeneracy = 1e-12;       // eigenvalue gap treated as a tie (scaled by max(1, |H|))
  double max_condition = 1e12;     // beyond this D is not trusted; use expm
  double normal_residual = 1e-10;  // Schur off-diagonal mass regarded as zero
};

// Normal modes of the coupling matrix: H = C^T diag(frequencies) C.
// Row m of `c` is the eigenvector belonging to frequencies[m].
struct NormalModes {
  RealMatrix c;
  RealVector frequencies;  // ascending
};

// Eigenvalues ascend; inside a degenerate cluster the basis is rebuilt from
// the projected unit vectors so the result does not depend on LAPACK ordering.
// Each vector's first significant component is positive.
NormalModes diagonalize_h(const RealMatrix& h, const SpectralTolerances& tol = {});

// HD = Gamma/2 + iH and its eigensystem HD D = D diag(omega).
struct DissipativeMatrix {
  ComplexMatrix hd;
  ComplexVector eigenvalues;  // sorted by (real, imag)
  ComplexMatrix d;            // column m is the eigenvector of eigenvalues[m]
  ComplexMatrix d_inv;
  double condition = 1.0;
  bool normal = false;        // D is unitary (Schur route)
  bool use_expm = false;      // D too ill-conditioned; propagate with expm
};

DissipativeMatrix build_hd(const RealMatrix& h, const RealMatrix& gamma,
                           const SpectralTolerances& tol = {});

// Amplitude propagator: zeta(t) = theta(t) * beta.
struct Propagator {
  double t = 0.0;
  ComplexMatrix theta;
};

// Theta(t) = D exp(-Omega t) D^{-1}; negative t is allowed.
Propagator propagator(const DissipativeMatrix& dm, double t);

// The sign-flipped reading exp(+HD t), used as a negative control.
Propagator propagator_flipped(const DissipativeMatrix& dm, double t);

// Direct matrix exponential of `a`. Used as the fallback path.
ComplexMatrix expm(const ComplexMatrix& a);

}  // namespace bosonet
