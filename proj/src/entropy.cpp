#include "bosonet/entropy.hpp"

#include <cmath>

namespace bosonet {

std::string to_string(EntropyKernel k) { return k == EntropyKernel::paper ? "paper" : "adjoint"; }

std::optional<EntropyKernel> entropy_kernel_from_string(const std::string& s) {
  if (s == "paper") return EntropyKernel::paper;
  if (s == "adjoint") return EntropyKernel::adjoint;
  return std::nullopt;
}

namespace {

ComplexMatrix purity_kernel(const DissipativeMatrix& dm, double t, const std::vector<int>& subset,
                            EntropyKernel kernel) {
  const Eigen::Index n = dm.hd.rows();
  if (kernel == EntropyKernel::adjoint) {
    const ComplexMatrix theta = propagator(dm, t).theta;
    ComplexMatrix rows(static_cast<Eigen::Index>(subset.size()), n);
    for (std::size_t k = 0; k < subset.size(); ++k)
      rows.row(static_cast<Eigen::Index>(k)) = theta.row(subset[k]);
    return rows.adjoint() * rows;
  }
  const ComplexMatrix back = propagator(dm, -t).theta;
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    double acc = 0.0;
    for (int m : subset) acc += std::norm(back(m, col));
    k(col, col) = acc;
  }
  return k;
}

}  // namespace

double coherent_purity(const CoherentSuperposition& state, const DissipativeMatrix& dm, double t,
                       const std::vector<int>& subset, EntropyKernel kernel) {
  const Eigen::Index q = state.amplitudes.size();
  const Eigen::Index n = state.labels.cols();
  if (dm.hd.rows() != n) throw ValidationError("entropy: network size does not match the state");
  if (subset.empty()) return 1.0;
  for (int m : subset)
    if (m < 0 || m >= n) throw ValidationError("entropy: oscillator index out of range");

  const ComplexMatrix k = purity_kernel(dm, t, subset, kernel);
  // quad(a, b) = beta^a^+ K beta^b
  const ComplexMatrix& b = state.labels;
  const ComplexMatrix quad = b.conjugate() * k * b.transpose();

  // log P_rs = log(norm^2 amp_r conj(amp_s) <beta^s|beta^r>)
  ComplexMatrix log_p(q, q);
  std::vector<bool> live(static_cast<std::size_t>(q));
  for (Eigen::Index r = 0; r < q; ++r) live[static_cast<std::size_t>(r)] = state.amplitudes(r) != 0.0;
  for (Eigen::Index r = 0; r < q; ++r)
    for (Eigen::Index s = 0; s < q; ++s) {
      if (!live[static_cast<std::size_t>(r)] || !live[static_cast<std::size_t>(s)]) continue;
      log_p(r, s) = 2.0 * std::log(state.norm) +
                    std::log(state.amplitudes(r) * std::conj(state.amplitudes(s))) +
                    log_coherent_overlap(b.row(s).transpose(), b.row(r).transpose());
    }

  // Tr rho_S^2 = sum_{rspq} P_rs P_pq exp(-(quad_sr - quad_sp - quad_qr + quad_qp))
  //            = sum_{s,q} [sum_r P_rs e^{quad_qr - quad_sr}] [sum_p P_pq e^{quad_sp - quad_qp}]
  cplx total = 0.0;
  for (Eigen::Index s = 0; s < q; ++s) {
    if (!live[static_cast<std::size_t>(s)]) continue;
    for (Eigen::Index qq = 0; qq < q; ++qq) {
      if (!live[static_cast<std::size_t>(qq)]) continue;
      cplx left = 0.0, right = 0.0;
      for (Eigen::Index r = 0; r < q; ++r)
        if (live[static_cast<std::size_t>(r)])
          left += std::exp(log_p(r, s) + quad(qq, r) - quad(s, r));
      for (Eigen::Index p = 0; p < q; ++p)
        if (live[static_cast<std::size_t>(p)])
          right += std::exp(log_p(p, qq) + quad(s, p) - quad(qq, p));
      total += left * right;
    }
  }
  return total.real();
}

EntropyReport linear_entropies(const CoherentSuperposition& state, const DissipativeMatrix& dm,
                               double t, int focus, EntropyKernel kernel) {
  const int n = static_cast<int>(state.labels.cols());
  if (focus < 0 || focus >= n) throw ValidationError("focus: oscillator index out of range");
  std::vector<int> all, rest;
  for (int m = 0; m < n; ++m) {
    all.push_back(m);
    if (m != focus) rest.push_back(m);
  }
  auto compute = [&](EntropyKernel k) {
    EntropyReport rep;
    rep.t = t;
    rep.focus = focus;
    rep.kernel = k;
    rep.s_full = 1.0 - coherent_purity(state, dm, t, all, k);
    rep.s_single = 1.0 - coherent_purity(state, dm, t, {focus}, k);
    rep.s_rest = rest.empty() ? 0.0 : 1.0 - coherent_purity(state, dm, t, rest, k);
    rep.excess = rep.s_single + rep.s_rest - rep.s_full;
    return rep;
  };
  EntropyReport rep = compute(kernel);
  const EntropyReport other =
      compute(kernel == EntropyKernel::paper ? EntropyKernel::adjoint : EntropyKernel::paper);
  rep.kernels_agree = std::abs(rep.s_full - other.s_full) <= 1e-9 &&
                      std::abs(rep.s_single - other.s_single) <= 1e-9 &&
                      std::abs(rep.s_rest - other.s_rest) <= 1e-9;
  return rep;
}

}  // namespace bosonet
