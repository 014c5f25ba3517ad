#include "bosonet/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace bosonet {

cplx log_coherent_overlap(const ComplexVector& alpha, const ComplexVector& beta) {
  cplx acc = 0.0;
  for (Eigen::Index m = 0; m < alpha.size(); ++m)
    acc += -0.5 * std::norm(alpha(m)) - 0.5 * std::norm(beta(m)) + std::conj(alpha(m)) * beta(m);
  return acc;
}

cplx coherent_overlap(const ComplexVector& alpha, const ComplexVector& beta) {
  if (alpha.size() != beta.size()) throw ValidationError("coherent_overlap: length mismatch");
  return std::exp(log_coherent_overlap(alpha, beta));
}

namespace {

ComplexVector row(const ComplexMatrix& m, Eigen::Index r) { return m.row(r).transpose(); }

ComplexVector row_subset(const ComplexMatrix& m, Eigen::Index r, const std::vector<int>& cols) {
  ComplexVector v(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) v(static_cast<Eigen::Index>(k)) = m(r, cols[k]);
  return v;
}

// log(norm^2 amp_r conj(amp_s) <beta^s|beta^r>); -inf when an amplitude is zero.
cplx log_prefactor(const CoherentSuperposition& st, Eigen::Index r, Eigen::Index s) {
  const cplx a = st.amplitudes(r) * std::conj(st.amplitudes(s));
  if (a == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
  return 2.0 * std::log(st.norm) + std::log(a) +
         log_coherent_overlap(row(st.labels, s), row(st.labels, r));
}

cplx safe_exp(cplx z) {
  if (std::isinf(z.real()) && z.real() < 0) return 0.0;
  return std::exp(z);
}

}  // namespace

CoherentSuperposition normalize_superposition(ComplexVector amplitudes, ComplexMatrix labels) {
  if (amplitudes.size() < 1) throw ValidationError("branches: need at least one branch");
  if (labels.rows() != amplitudes.size())
    throw ValidationError("branches: one label row per amplitude");
  if (labels.cols() < 1) throw ValidationError("labels: need at least one oscillator");
  CoherentSuperposition st{std::move(amplitudes), std::move(labels), 1.0};
  const Eigen::Index q = st.amplitudes.size();
  double trace = 0.0;
  for (Eigen::Index r = 0; r < q; ++r)
    for (Eigen::Index s = 0; s < q; ++s)
      trace += (st.amplitudes(r) * std::conj(st.amplitudes(s)) *
                coherent_overlap(row(st.labels, s), row(st.labels, r)))
                   .real();
  const double scale = st.amplitudes.squaredNorm();
  if (!(trace > 1e-14 * std::max(scale, 1e-300)) || !std::isfinite(trace))
    throw ValidationError("branches: superposition has zero norm (degenerate state)");
  st.norm = 1.0 / std::sqrt(trace);
  return st;
}

namespace {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  // Golub-Welsch: eigenvalues of the Jacobi matrix.
  RealMatrix j = RealMatrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(j);
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    x[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    w[static_cast<std::size_t>(k)] = 2.0 * v0 * v0;
  }
}

}  // namespace

CoherentSuperposition discretize_continuum(const std::function<cplx(double)>& amplitude,
                                           const std::function<ComplexVector(double)>& labels,
                                           double theta_min, double theta_max, int nodes,
                                           Quadrature rule) {
  if (nodes < 1) throw ValidationError("nodes: must be positive");
  if (!(theta_max > theta_min)) throw ValidationError("theta: empty integration range");
  std::vector<double> theta, weight;
  if (rule == Quadrature::gauss_legendre) {
    std::vector<double> x;
    gauss_legendre(nodes, x, weight);
    const double half = 0.5 * (theta_max - theta_min);
    for (std::size_t k = 0; k < x.size(); ++k) {
      theta.push_back(theta_min + half * (x[k] + 1.0));
      weight[k] *= half;
    }
  } else {
    const double h = (theta_max - theta_min) / nodes;
    for (int k = 0; k < nodes; ++k) {
      theta.push_back(theta_min + k * h);
      weight.push_back(h);
    }
  }
  const ComplexVector first = labels(theta.front());
  ComplexVector amps(nodes);
  ComplexMatrix lab(nodes, first.size());
  for (int k = 0; k < nodes; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    amps(k) = weight[uk] * amplitude(theta[uk]);
    const ComplexVector b = labels(theta[uk]);
    if (b.size() != first.size()) throw ValidationError("labels: inconsistent oscillator count");
    lab.row(k) = b.transpose();
  }
  return normalize_superposition(std::move(amps), std::move(lab));
}

EvolvedCoherentState evolve_coherent(const CoherentSuperposition& state, const Propagator& theta) {
  const Eigen::Index n = state.labels.cols();
  if (theta.theta.rows() != n || theta.theta.cols() != n)
    throw ValidationError("propagator: size does not match the state");
  EvolvedCoherentState ev;
  ev.t = theta.t;
  ev.initial = state;
  ev.theta = theta.theta;
  ev.zeta = state.labels * theta.theta.transpose();
  ev.subset.resize(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < n; ++m) ev.subset[static_cast<std::size_t>(m)] = static_cast<int>(m);
  const Eigen::Index q = state.amplitudes.size();
  ev.weights.resize(q, q);
  for (Eigen::Index r = 0; r < q; ++r)
    for (Eigen::Index s = 0; s < q; ++s)
      ev.weights(r, s) = safe_exp(log_prefactor(state, r, s) -
                                  log_coherent_overlap(row(ev.zeta, s), row(ev.zeta, r)));
  return ev;
}

EvolvedCoherentState reduce_coherent(const EvolvedCoherentState& ev, const std::vector<int>& keep) {
  if (keep.empty()) throw ValidationError("keep: subset must be non-empty");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw ValidationError("keep: duplicate oscillator");
  std::vector<int> cols;
  for (int m : kept) {
    auto it = std::find(ev.subset.begin(), ev.subset.end(), m);
    if (it == ev.subset.end()) throw ValidationError("keep: oscillator not present in state");
    cols.push_back(static_cast<int>(it - ev.subset.begin()));
  }
  EvolvedCoherentState out = ev;
  out.subset = kept;
  const Eigen::Index q = ev.zeta.rows();
  out.zeta.resize(q, static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index r = 0; r < q; ++r) out.zeta.row(r) = row_subset(ev.zeta, r, cols).transpose();
  for (Eigen::Index r = 0; r < q; ++r)
    for (Eigen::Index s = 0; s < q; ++s)
      out.weights(r, s) = safe_exp(log_prefactor(ev.initial, r, s) -
                                   log_coherent_overlap(row(out.zeta, s), row(out.zeta, r)));
  return out;
}

namespace {

// O(s, r) = <zeta_a^s | zeta_b^r>
ComplexMatrix overlap_matrix(const ComplexMatrix& za, const ComplexMatrix& zb) {
  ComplexMatrix o(za.rows(), zb.rows());
  for (Eigen::Index s = 0; s < za.rows(); ++s)
    for (Eigen::Index r = 0; r < zb.rows(); ++r) o(s, r) = coherent_overlap(row(za, s), row(zb, r));
  return o;
}

}  // namespace

cplx coherent_trace(const EvolvedCoherentState& ev) {
  // sum_rs w_rs <zeta^s|zeta^r> = Tr(W O), O(s, r) = <zeta^s|zeta^r>
  return (ev.weights * overlap_matrix(ev.zeta, ev.zeta)).trace();
}

ComplexMatrix to_density_matrix(const EvolvedCoherentState& ev, const FockBasis& basis) {
  if (basis.modes() != static_cast<int>(ev.subset.size()))
    throw ValidationError("basis: mode count does not match the state");
  const Eigen::Index q = ev.zeta.rows();
  ComplexMatrix v(static_cast<Eigen::Index>(basis.dimension()), q);
  for (Eigen::Index r = 0; r < q; ++r) v.col(r) = coherent_product(basis, row(ev.zeta, r));
  return v * ev.weights * v.adjoint();
}

std::vector<double> mean_photons(const EvolvedCoherentState& ev) {
  const ComplexMatrix o = overlap_matrix(ev.zeta, ev.zeta);
  std::vector<double> out(ev.subset.size(), 0.0);
  const Eigen::Index q = ev.zeta.rows();
  for (std::size_t m = 0; m < out.size(); ++m) {
    cplx acc = 0.0;
    const auto c = static_cast<Eigen::Index>(m);
    for (Eigen::Index r = 0; r < q; ++r)
      for (Eigen::Index s = 0; s < q; ++s)
        acc += ev.weights(r, s) * std::conj(ev.zeta(s, c)) * ev.zeta(r, c) * o(s, r);
    out[m] = acc.real();
  }
  return out;
}

double overlap_trace(const EvolvedCoherentState& a, const EvolvedCoherentState& b) {
  if (a.zeta.cols() != b.zeta.cols()) throw ValidationError("overlap_trace: mode count mismatch");
  // sum w^a_rs <za^s|zb^p> w^b_pq <zb^q|za^r> = Tr(Wa O_ab Wb O_ba)
  const ComplexMatrix oab = overlap_matrix(a.zeta, b.zeta);
  const ComplexMatrix oba = overlap_matrix(b.zeta, a.zeta);
  return (a.weights * oab * b.weights * oba).trace().real();
}

namespace {

EvolvedCoherentState initial_state(const EvolvedCoherentState& ev) {
  const auto n = ev.initial.labels.cols();
  return evolve_coherent(ev.initial, Propagator{0.0, ComplexMatrix::Identity(n, n)});
}

void check_oscillator(const EvolvedCoherentState& ev, int m) {
  if (m < 0 || m >= ev.initial.labels.cols()) throw ValidationError("oscillator index out of range");
}

}  // namespace

double recurrence_probability(const EvolvedCoherentState& ev, int m) {
  return transfer_probability(ev, m, m);
}

double transfer_probability(const EvolvedCoherentState& ev, int source, int target) {
  check_oscillator(ev, source);
  check_oscillator(ev, target);
  const auto now = reduce_coherent(ev, {target});
  const auto before = reduce_coherent(initial_state(ev), {source});
  return overlap_trace(now, before);
}

std::vector<DecoherenceFactor> decoherence_coefficients(const EvolvedCoherentState& ev) {
  std::vector<DecoherenceFactor> out;
  const Eigen::Index q = ev.zeta.rows();
  const auto& labels = ev.initial.labels;
  for (Eigen::Index r = 0; r < q; ++r)
    for (Eigen::Index s = r + 1; s < q; ++s) {
      const cplx log_full = log_coherent_overlap(row(labels, r), row(labels, s));
      const cplx log_zeta = log_coherent_overlap(row(ev.zeta, r), row(ev.zeta, s));
      const cplx log_sub0 = log_coherent_overlap(row_subset(labels, r, ev.subset),
                                                 row_subset(labels, s, ev.subset));
      DecoherenceFactor f;
      f.r = static_cast<int>(r);
      f.s = static_cast<int>(s);
      f.magnitude = std::exp((log_sub0 - log_zeta).real());
      f.real = std::exp(log_full - log_zeta).real();
      out.push_back(f);
    }
  return out;
}

}  // namespace bosonet
