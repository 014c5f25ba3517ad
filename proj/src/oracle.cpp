#include "bosonet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace bosonet::oracle {

namespace {

using SparseC = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using SparseColC = Eigen::SparseMatrix<cplx>;

SparseColC annihilation_sparse(const FockBasis& basis, int mode) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  const auto stride = static_cast<Eigen::Index>(basis.stride(mode));
  std::vector<Eigen::Triplet<cplx>> entries;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const int n = basis.occupation(static_cast<std::size_t>(i), mode);
    if (n > 0) entries.emplace_back(i - stride, i, std::sqrt(static_cast<double>(n)));
  }
  SparseColC a(dim, dim);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

double nbar_of(const std::vector<double>& nbar, Eigen::Index m) {
  return nbar.empty() ? 0.0 : nbar[static_cast<std::size_t>(m)];
}

}  // namespace

LindbladGenerator::LindbladGenerator(FockBasis basis_, RealMatrix h_, RealMatrix gamma_,
                                     std::vector<double> nbar_, double frame_)
    : basis(std::move(basis_)),
      h(std::move(h_)),
      gamma(std::move(gamma_)),
      nbar(std::move(nbar_)),
      frame(frame_) {
  const int n = basis.modes();
  if (h.rows() != n || h.cols() != n || gamma.rows() != n || gamma.cols() != n)
    throw ValidationError("oracle: coupling and damping matrices must be N x N");
  if (!nbar.empty() && static_cast<int>(nbar.size()) != n)
    throw ValidationError("oracle: one thermal occupation per oscillator");
  for (double x : nbar)
    if (!(x >= 0.0)) throw ValidationError("oracle: thermal occupations must be non-negative");

  std::vector<SparseColC> a;
  for (int m = 0; m < n; ++m) a.push_back(annihilation_sparse(basis, m));

  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  SparseColC g(dim, dim);
  std::map<std::tuple<int, int, bool>, double> jump_weights;
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double hmk = h(m, k) - (m == k ? frame : 0.0);
      const double w = 0.5 * (nbar_of(nbar, m) + 1.0) * gamma(m, k);
      const double t = 0.5 * nbar_of(nbar, m) * gamma(m, k);
      const auto& am = a[static_cast<std::size_t>(m)];
      const auto& ak = a[static_cast<std::size_t>(k)];
      const cplx coeff = hmk - kI * w;
      if (coeff != 0.0) g += coeff * SparseColC(am.adjoint() * ak);
      if (t != 0.0) g += (-kI * t) * SparseColC(am * ak.adjoint());
      // W (a_k rho a_m^+ + a_m rho a_k^+), T (a_k^+ rho a_m + a_m^+ rho a_k)
      if (w != 0.0) {
        jump_weights[{int(k), int(m), false}] += w;
        jump_weights[{int(m), int(k), false}] += w;
      }
      if (t != 0.0) {
        jump_weights[{int(k), int(m), true}] += t;
        jump_weights[{int(m), int(k), true}] += t;
      }
    }
  }
  g.prune(cplx(0.0));
  g_ = SparseC(g);
  g_.makeCompressed();
  for (const auto& [key, weight] : jump_weights) {
    if (weight == 0.0) continue;
    const auto [p, q, raising] = key;
    jumps_.push_back({p, q, weight, raising});
  }
}

namespace {

// Computes rows i >= first(j) of every column j. With `lower_only` set the
// input is assumed Hermitian and the strict upper triangle is mirrored.
template <bool lower_only>
void apply_impl(const LindbladGenerator& gen, const ComplexMatrix& rho, ComplexMatrix& out) {
  const FockBasis& basis = gen.basis;
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  if (rho.rows() != dim || rho.cols() != dim)
    throw ValidationError("oracle: density matrix does not match the basis dimension");
  out.resize(dim, dim);

  const auto& g = gen.effective();
  const cplx* gv = g.valuePtr();
  const int* gi = g.innerIndexPtr();
  const int* go = g.outerIndexPtr();
  const auto& jumps = gen.jumps();

  // Per mode and basis index: sqrt(n+1) (0 at the truncation edge) and sqrt(n).
  const auto modes = static_cast<std::size_t>(basis.modes());
  std::vector<std::vector<double>> up(modes), dn(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    const int d = basis.levels(static_cast<int>(m));
    up[m].resize(static_cast<std::size_t>(dim));
    dn[m].resize(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
      const int n = basis.occupation(static_cast<std::size_t>(i), static_cast<int>(m));
      up[m][static_cast<std::size_t>(i)] = n + 1 < d ? std::sqrt(double(n + 1)) : 0.0;
      dn[m][static_cast<std::size_t>(i)] = std::sqrt(double(n));
    }
  }

#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Eigen::Index first = lower_only ? j : 0;
    cplx* dst = out.col(j).data();
    const cplx* src = rho.col(j).data();
    // -i G rho
    for (Eigen::Index i = first; i < dim; ++i) {
      cplx acc = 0.0;
      for (int e = go[i]; e < go[i + 1]; ++e) acc += gv[e] * src[gi[e]];
      dst[i] = cplx(acc.imag(), -acc.real());
    }
    // +i rho G^+ : column j picks up conj(G_jk) rho(:, k)
    for (int e = go[j]; e < go[j + 1]; ++e) {
      const cplx c = kI * std::conj(gv[e]);
      const cplx* col = rho.col(gi[e]).data();
      for (Eigen::Index i = first; i < dim; ++i) dst[i] += c * col[i];
    }
    for (const auto& jump : jumps) {
      const auto p = static_cast<std::size_t>(jump.p);
      const auto q = static_cast<std::size_t>(jump.q);
      const auto sp = static_cast<Eigen::Index>(basis.stride(jump.p));
      const auto sq = static_cast<Eigen::Index>(basis.stride(jump.q));
      if (!jump.raising) {
        // a_p rho a_q^+
        const double fq = up[q][static_cast<std::size_t>(j)];
        if (fq == 0.0) continue;
        const cplx* col = rho.col(j + sq).data();
        const double wq = jump.weight * fq;
        const double* fp = up[p].data();
        for (Eigen::Index i = first; i < dim; ++i)
          if (fp[i] != 0.0) dst[i] += (wq * fp[i]) * col[i + sp];
      } else {
        // a_p^+ rho a_q
        const double fq = dn[q][static_cast<std::size_t>(j)];
        if (fq == 0.0) continue;
        const cplx* col = rho.col(j - sq).data();
        const double wq = jump.weight * fq;
        const double* fp = dn[p].data();
        for (Eigen::Index i = std::max(first, sp); i < dim; ++i)
          if (fp[i] != 0.0) dst[i] += (wq * fp[i]) * col[i - sp];
      }
    }
  }
  if constexpr (lower_only) {
    for (Eigen::Index j = 1; j < dim; ++j)
      for (Eigen::Index i = 0; i < j; ++i) out(i, j) = std::conj(out(j, i));
  }
}

}  // namespace

void apply_generator(const LindbladGenerator& gen, const ComplexMatrix& rho, ComplexMatrix& out) {
  apply_impl<false>(gen, rho, out);
}

void apply_generator_hermitian(const LindbladGenerator& gen, const ComplexMatrix& rho,
                               ComplexMatrix& out) {
  apply_impl<true>(gen, rho, out);
}

ComplexMatrix apply_generator(const LindbladGenerator& gen, const ComplexMatrix& rho) {
  ComplexMatrix out;
  apply_generator(gen, rho, out);
  return out;
}

ComplexMatrix apply_generator_reference(const LindbladGenerator& gen, const ComplexMatrix& rho) {
  const int n = gen.basis.modes();
  std::vector<ComplexMatrix> a;
  for (int m = 0; m < n; ++m) a.push_back(gen.basis.annihilation(m).cast<cplx>());
  const auto dim = static_cast<Eigen::Index>(gen.basis.dimension());

  ComplexMatrix hs = ComplexMatrix::Zero(dim, dim);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      const double hmk = gen.h(m, k) - (m == k ? gen.frame : 0.0);
      if (hmk != 0.0) hs += hmk * a[m].adjoint() * a[k];
    }
  auto comm = [](const ComplexMatrix& x, const ComplexMatrix& y) -> ComplexMatrix {
    return x * y - y * x;
  };
  ComplexMatrix out = -kI * comm(hs, rho);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      const double g = gen.gamma(m, k);
      if (g == 0.0) continue;
      const double nb = gen.nbar.empty() ? 0.0 : gen.nbar[static_cast<std::size_t>(m)];
      const ComplexMatrix am_dag = a[m].adjoint();
      const ComplexMatrix ak_dag = a[k].adjoint();
      out += 0.5 * g * (nb + 1.0) *
             (comm(a[k] * rho, am_dag) + comm(a[m], ComplexMatrix(rho * ak_dag)));
      if (nb != 0.0)
        out += 0.5 * g * nb * (comm(ak_dag * rho, a[m]) + comm(am_dag, ComplexMatrix(rho * a[k])));
    }
  return out;
}

double recommended_dt(const LindbladGenerator& gen) {
  const int n = gen.basis.modes();
  RealMatrix shifted = gen.h - gen.frame * RealMatrix::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(shifted, Eigen::EigenvaluesOnly);
  const double freq = es.eigenvalues().cwiseAbs().maxCoeff();
  int dmax = 1;
  for (int m = 0; m < n; ++m) dmax = std::max(dmax, gen.basis.levels(m));
  const double rate = gen.gamma.size() ? gen.gamma.cwiseAbs().maxCoeff() : 0.0;
  const double bound = freq + rate * dmax;
  return bound > 0.0 ? std::min(0.1, 0.25 / bound) : 0.1;
}

namespace {

void to_lab_frame(const LindbladGenerator& gen, double t, ComplexMatrix& rho) {
  if (gen.frame == 0.0 || t == 0.0) return;
  const auto dim = static_cast<Eigen::Index>(gen.basis.dimension());
  ComplexVector phase(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    int total = 0;
    for (int m = 0; m < gen.basis.modes(); ++m) total += gen.basis.occupation(static_cast<std::size_t>(i), m);
    phase(i) = std::exp(-kI * (gen.frame * total * t));
  }
  rho = phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
}

}  // namespace

Trajectory integrate(const LindbladGenerator& gen, const ComplexMatrix& rho0, double t_final,
                     const IntegrationOptions& options) {
  if (!(options.dt > 0.0)) throw ValidationError("dt: must be positive");
  if (!(t_final >= 0.0)) throw ValidationError("t_final: must be non-negative");
  std::vector<double> targets = options.sample_times;
  for (double s : targets)
    if (s < 0.0 || s > t_final) throw ValidationError("sample_times: must lie in [0, t_final]");
  if (!std::is_sorted(targets.begin(), targets.end()))
    throw ValidationError("sample_times: must be ascending");
  if (targets.empty() || targets.back() != t_final) targets.push_back(t_final);

  Trajectory traj;
  ComplexMatrix rho = rho0;
  ComplexMatrix acc, stage, k;
  const cplx trace0 = rho.trace();
  double t = 0.0;

  auto record = [&](double at) {
    ComplexMatrix lab = rho;
    to_lab_frame(gen, at, lab);
    if (options.track_positivity) {
      const double lo = min_eigenvalue(lab);
      traj.stats.min_eigenvalue =
          traj.states.empty() ? lo : std::min(traj.stats.min_eigenvalue, lo);
    }
    traj.times.push_back(at);
    traj.states.push_back(std::move(lab));
  };

  for (std::size_t s = 0; s < targets.size(); ++s) {
    const double target = targets[s];
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / options.dt - 1e-9));
      const double h = span / static_cast<double>(steps);
      const auto apply = [&](const ComplexMatrix& in, ComplexMatrix& o) {
        if (options.exploit_hermiticity)
          apply_generator_hermitian(gen, in, o);
        else
          apply_generator(gen, in, o);
      };
      for (long step = 0; step < steps; ++step) {
        apply(rho, k);
        acc = rho + (h / 6.0) * k;
        stage = rho + (0.5 * h) * k;
        apply(stage, k);
        acc += (h / 3.0) * k;
        stage = rho + (0.5 * h) * k;
        apply(stage, k);
        acc += (h / 3.0) * k;
        stage = rho + h * k;
        apply(stage, k);
        acc += (h / 6.0) * k;

        const double herm = (acc - acc.adjoint()).cwiseAbs().maxCoeff();
        traj.stats.max_hermiticity_defect = std::max(traj.stats.max_hermiticity_defect, herm);
        rho = 0.5 * (acc + acc.adjoint());
        ++traj.stats.steps;

        const double drift = std::abs(rho.trace() - trace0);
        traj.stats.max_trace_drift = std::max(traj.stats.max_trace_drift, drift);
        if (drift > options.trace_tolerance) {
          std::ostringstream os;
          os << "trace drifted by " << drift << " at t=" << t + (step + 1) * h
             << "; reduce dt (currently " << options.dt << ")";
          throw NumericalError(os.str());
        }
      }
      t = target;
    }
    const bool requested =
        std::find(options.sample_times.begin(), options.sample_times.end(), target) !=
        options.sample_times.end();
    if (requested || s + 1 == targets.size()) record(target);
  }
  return traj;
}

DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<int>& keep) {
  const FockBasis& basis = state.basis;
  if (keep.empty()) throw ValidationError("keep: subset must be non-empty");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.front() < 0 ||
      kept.back() >= basis.modes())
    throw ValidationError("keep: invalid oscillator subset");
  std::vector<int> traced;
  for (int m = 0; m < basis.modes(); ++m)
    if (!std::binary_search(kept.begin(), kept.end(), m)) traced.push_back(m);

  std::vector<int> kept_levels, traced_levels;
  for (int m : kept) kept_levels.push_back(basis.levels(m));
  for (int m : traced) traced_levels.push_back(basis.levels(m));
  FockBasis kb(kept_levels);
  FockBasis tb(traced_levels.empty() ? std::vector<int>{1} : traced_levels);

  // full index for every (kept, traced) combination
  const std::size_t kd = kb.dimension();
  const std::size_t td = tb.dimension();
  std::vector<std::size_t> full(kd * td);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    std::size_t ki = 0, ti = 0;
    for (std::size_t a = 0; a < kept.size(); ++a)
      ki += kb.stride(static_cast<int>(a)) * static_cast<std::size_t>(basis.occupation(i, kept[a]));
    for (std::size_t a = 0; a < traced.size(); ++a)
      ti += tb.stride(static_cast<int>(a)) * static_cast<std::size_t>(basis.occupation(i, traced[a]));
    full[ki * td + ti] = i;
  }

  DensityMatrix out{kb, ComplexMatrix::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd))};
  for (std::size_t kj = 0; kj < kd; ++kj)
    for (std::size_t ki = 0; ki < kd; ++ki) {
      cplx acc = 0.0;
      for (std::size_t ti = 0; ti < td; ++ti)
        acc += state.rho(static_cast<Eigen::Index>(full[ki * td + ti]),
                         static_cast<Eigen::Index>(full[kj * td + ti]));
      out.rho(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(kj)) = acc;
    }
  return out;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix diff = a - b;
  const ComplexMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double purity(const ComplexMatrix& rho) {
  // Tr[rho^2] = sum_ij rho_ij rho_ji
  return (rho.cwiseProduct(rho.transpose())).sum().real();
}

double min_eigenvalue(const ComplexMatrix& rho) {
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<double> mean_photon_numbers(const DensityMatrix& state) {
  std::vector<double> out(static_cast<std::size_t>(state.basis.modes()), 0.0);
  for (std::size_t i = 0; i < state.basis.dimension(); ++i) {
    const double p = state.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    for (int m = 0; m < state.basis.modes(); ++m)
      out[static_cast<std::size_t>(m)] += p * state.basis.occupation(i, m);
  }
  return out;
}

double overlap_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  return (rho.cwiseProduct(sigma.transpose())).sum().real();
}

cplx coherence_element(const DensityMatrix& state, const ComplexVector& alpha,
                       const ComplexVector& gamma) {
  const ComplexVector va = coherent_product(state.basis, alpha);
  const ComplexVector vg = coherent_product(state.basis, gamma);
  return va.dot(state.rho * vg);
}

Observables observables(const DensityMatrix& state) {
  return {state.rho.trace().real(), purity(state.rho), mean_photon_numbers(state)};
}

}  // namespace bosonet::oracle
