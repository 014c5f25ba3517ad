#include "bosonet/dissipation.hpp"

#include <cmath>
#include <sstream>

namespace bosonet {

namespace {

double checked_rate(const DampingModel& model, double w, int oscillator) {
  const double g = model(w);
  if (!(g >= 0.0)) {
    std::ostringstream os;
    os << "damping model (" << model.kind_name() << ") of oscillator " << oscillator + 1
       << " evaluates to rate " << g << " at frequency " << w;
    throw ModelError(os.str());
  }
  return g;
}

// rates(m, n') = gamma_m(varpi_n'), zero for reservoir-free oscillators.
RealMatrix rate_table(const NormalModes& modes, const OscillatorModels& models) {
  const Eigen::Index n = modes.c.rows();
  if (static_cast<Eigen::Index>(models.size()) != n)
    throw ValidationError("damping: expected one model slot per oscillator");
  RealMatrix rates = RealMatrix::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto& model = models[static_cast<std::size_t>(m)];
    if (!model) continue;
    for (Eigen::Index k = 0; k < n; ++k)
      rates(m, k) = checked_rate(*model, modes.frequencies(k), static_cast<int>(m));
  }
  return rates;
}

}  // namespace

DampingMatrix gamma_distinct(const NormalModes& modes, const OscillatorModels& models,
                             RateEvaluation eval, const RealVector& bare_omega) {
  const Eigen::Index n = modes.c.rows();
  if (static_cast<Eigen::Index>(models.size()) != n)
    throw ValidationError("damping: expected one model slot per oscillator");
  if (eval == RateEvaluation::bare_frequency && bare_omega.size() != n)
    throw ValidationError("damping: bare frequencies required for weak-coupling evaluation");
  const double big_n = static_cast<double>(n);
  const RealMatrix& c = modes.c;

  DampingMatrix out{RealMatrix::Zero(n, n), DampingProvenance::distinct};
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto& model = models[static_cast<std::size_t>(m)];
    if (!model) continue;
    // A flat rate collapses the sum through C^T C = 1.
    if (eval == RateEvaluation::bare_frequency || model->is_frequency_independent()) {
      const double w = eval == RateEvaluation::bare_frequency ? bare_omega(m) : 0.0;
      out.gamma(m, m) = big_n * checked_rate(*model, w, static_cast<int>(m));
      continue;
    }
    RealVector g(n);
    for (Eigen::Index k = 0; k < n; ++k)
      g(k) = checked_rate(*model, modes.frequencies(k), static_cast<int>(m));
    // Gamma_mn = N sum_k C_km g_k C_kn
    out.gamma.row(m) = big_n * (c.col(m).cwiseProduct(g)).transpose() * c;
  }
  return out;
}

OverlapModel OverlapModel::identity(int n) { return {RealMatrix::Identity(n, n)}; }

OverlapModel OverlapModel::uniform(int n, double value) {
  RealMatrix rho = RealMatrix::Constant(n, n, value);
  rho.diagonal().setOnes();
  return {rho};
}

void OverlapModel::validate() const {
  if (rho.rows() != rho.cols()) throw ValidationError("overlap: must be square");
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      const double v = rho(i, j);
      if (!(v >= 0.0 && v <= 1.0) || v != rho(j, i) || (i == j && v != 1.0))
        throw ValidationError("overlap: entries must be symmetric in [0,1] with unit diagonal");
    }
}

DampingMatrix gamma_common(const NormalModes& modes, const OscillatorModels& models,
                           const OverlapModel& overlap) {
  const Eigen::Index n = modes.c.rows();
  overlap.validate();
  if (overlap.rho.rows() != n) throw ValidationError("overlap: size does not match the network");
  const RealMatrix rates = rate_table(modes, models);
  const RealMatrix& c = modes.c;
  const double big_n = static_cast<double>(n);

  DampingMatrix out{RealMatrix::Zero(n, n), DampingProvenance::common};
  for (Eigen::Index k = 0; k < n; ++k) {
    // xi(m, m') at varpi_k
    RealMatrix xi(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
      for (Eigen::Index mp = 0; mp < n; ++mp)
        xi(m, mp) = m == mp ? rates(m, k)
                            : overlap.rho(m, mp) * std::sqrt(rates(m, k) * rates(mp, k));
    // sum_{m'} xi_mm' C_km' C_kn
    out.gamma += big_n * (xi * c.row(k).transpose()) * c.row(k);
  }
  return out;
}

PsdReport check_psd(const RealMatrix& gamma, double tol) {
  if (gamma.size() == 0) return {};
  const RealMatrix sym = 0.5 * (gamma + gamma.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return {lo >= -tol, lo};
}

PreparedDamping prepare_damping(const RealMatrix& gamma, bool symmetrize, double tol) {
  PreparedDamping out;
  out.gamma = gamma;
  out.asymmetry = gamma.size() ? (gamma - gamma.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (symmetrize && out.asymmetry > tol) {
    out.gamma = 0.5 * (gamma + gamma.transpose());
    out.symmetrized = true;
  }
  return out;
}

OscillatorModels resolve_models(const NetworkSpec& spec) {
  OscillatorModels models(static_cast<std::size_t>(spec.n));
  for (const auto& o : spec.oscillators) {
    if (o.reservoir.kind == ReservoirKind::none) continue;
    models[static_cast<std::size_t>(o.index - 1)] = spec.damping_models.at(o.reservoir.model);
  }
  return models;
}

NetworkMatrices assemble(const NetworkSpec& spec, const DampingOptions& opts) {
  NetworkMatrices out;
  out.h = build_coupling_matrix(spec);
  out.modes = diagonalize_h(out.h);
  const auto models = resolve_models(spec);
  if (spec.reservoir_mode == ReservoirMode::common) {
    const OverlapModel overlap =
        spec.overlap ? OverlapModel{*spec.overlap} : OverlapModel::uniform(spec.n, 1.0);
    out.raw_gamma = gamma_common(out.modes, models, overlap);
  } else {
    out.raw_gamma = gamma_distinct(out.modes, models, opts.evaluation, out.h.diagonal());
  }
  out.damping = prepare_damping(out.raw_gamma.gamma, opts.symmetrize, opts.symmetry_tol);
  out.psd = check_psd(out.damping.gamma);
  return out;
}

}  // namespace bosonet
