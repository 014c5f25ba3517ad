#pragma once

#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "bosonet/fock_basis.hpp"
#include "bosonet/types.hpp"

namespace bosonet::oracle {

// Density operator over a truncated product basis.
struct DensityMatrix {
  FockBasis basis;
  ComplexMatrix rho;
};

// Generalized Lindblad generator over the truncated basis,
//   d rho/dt = -i[H_S, rho]
//     + sum_mn (Gamma_mn/2) { (Nbar_m + 1)([a_n rho, a_m^+] + [a_m, rho a_n^+])
//                           +  Nbar_m     ([a_n^+ rho, a_m] + [a_m^+, rho a_n]) }.
// `frame` shifts H_S by -frame * sum_m a_m^+ a_m. That is the exact rotating
// frame at `frame`; integrate() undoes it.
struct LindbladGenerator {
  FockBasis basis;
  RealMatrix h;               // one-particle coupling matrix
  RealMatrix gamma;           // damping matrix
  std::vector<double> nbar;   // thermal occupations, empty = 0K
  double frame = 0.0;

  LindbladGenerator(FockBasis basis, RealMatrix h, RealMatrix gamma,
                    std::vector<double> nbar = {}, double frame = 0.0);

  // Effective non-Hermitian part G: drho = -i G rho + i rho G^+ + jumps.
  const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& effective() const { return g_; }

  struct Jump {
    int p = 0;
    int q = 0;
    double weight = 0.0;
    bool raising = false;  // a_p^+ rho a_q instead of a_p rho a_q^+
  };
  const std::vector<Jump>& jumps() const { return jumps_; }

 private:
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> g_;
  std::vector<Jump> jumps_;
};

// Index-table kernel, OpenMP-parallel over columns of rho.
void apply_generator(const LindbladGenerator& gen, const ComplexMatrix& rho, ComplexMatrix& out);
ComplexMatrix apply_generator(const LindbladGenerator& gen, const ComplexMatrix& rho);
// Same kernel for Hermitian rho: computes the lower triangle and mirrors it.
void apply_generator_hermitian(const LindbladGenerator& gen, const ComplexMatrix& rho,
                               ComplexMatrix& out);

// Serial reference: the generator written with dense operator products,
// term by term. O(dim^3); intended for tests and small systems.
ComplexMatrix apply_generator_reference(const LindbladGenerator& gen, const ComplexMatrix& rho);

struct IntegrationOptions {
  double dt = 0.01;
  double trace_tolerance = 1e-8;
  // Record the state at these times (ascending, within [0, t_final]).
  std::vector<double> sample_times;
  // Computes the smallest eigenvalue of every recorded state.
  bool track_positivity = false;
  // Use the half-triangle kernel. The Hermiticity defect is then zero by
  // construction; switch off to measure it.
  bool exploit_hermiticity = true;
};

struct IntegrationStats {
  int steps = 0;
  double max_trace_drift = 0.0;
  double max_hermiticity_defect = 0.0;  // before each symmetrization
  double min_eigenvalue = 0.0;          // over recorded samples, if tracked
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;  // lab frame
  IntegrationStats stats;
};

// Fixed-step classic RK4 in the generator's frame; recorded states are in
// the lab frame. Each interval between samples is split into equal steps no
// longer than dt, so samples land exactly on the requested times. The final
// time is always recorded. Throws NumericalError if the trace drifts beyond
// options.trace_tolerance.
Trajectory integrate(const LindbladGenerator& gen, const ComplexMatrix& rho0, double t_final,
                     const IntegrationOptions& options);

// Step size recommended for a generator: 0.25 / (max |eigenfrequency in frame|
// + max Gamma * max level), capped at 0.1.
double recommended_dt(const LindbladGenerator& gen);

DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<int>& keep);

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double purity(const ComplexMatrix& rho);
double min_eigenvalue(const ComplexMatrix& rho);
std::vector<double> mean_photon_numbers(const DensityMatrix& state);
// Tr[rho sigma]
double overlap_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);
// <alpha| rho |gamma> for product coherent vectors.
cplx coherence_element(const DensityMatrix& state, const ComplexVector& alpha,
                       const ComplexVector& gamma);

// Mode-resolved helpers for observables that act on one oscillator.
struct Observables {
  double trace = 0.0;
  double purity = 0.0;
  std::vector<double> mean_photons;
};
Observables observables(const DensityMatrix& state);

}  // namespace bosonet::oracle
