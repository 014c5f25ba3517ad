#include "bosonet/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>

#include <omp.h>

#include "bosonet/coherent.hpp"
#include "bosonet/fock.hpp"

namespace bosonet {

namespace {

const std::vector<std::string> kGroups = {"P_R", "P_T", "entropy", "coherence", "populations"};

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

int branch_count(const InitialState& state) {
  if (const auto* c = std::get_if<CoherentSuperposition>(&state)) return c->branches();
  return 0;
}

std::vector<std::string> resolve_groups(const std::vector<std::string>& requested,
                                        const InitialState& state) {
  const bool coherent = std::holds_alternative<CoherentSuperposition>(state);
  std::vector<std::string> out;
  if (requested.empty()) {
    for (const auto& g : kGroups)
      if (g != "coherence" || (coherent && branch_count(state) >= 2)) out.push_back(g);
    return out;
  }
  for (const auto& r : requested) {
    if (!has(kGroups, r)) throw ValidationError("observables: unknown group '" + r + "'");
    if (r == "coherence" && !coherent)
      throw ValidationError("observables: coherence is defined for coherent superpositions only");
    if (r == "coherence" && branch_count(state) < 2)
      throw ValidationError("observables: coherence needs at least two branches");
  }
  // Canonical order so the schema does not depend on how the list was typed.
  for (const auto& g : kGroups)
    if (has(requested, g)) out.push_back(g);
  return out;
}

double linear_entropy(const ComplexMatrix& rho) { return 1.0 - oracle::purity(rho); }

// Runs body(k) for k in [0, count) on up to `workers` threads and rethrows
// the first failure (by index) afterwards.
template <typename Body>
void parallel_for(std::size_t count, int workers, Body body) {
  std::vector<std::exception_ptr> errors(count);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t k = 0; k < count; ++k) {
    try {
      body(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> coherent_row(const CoherentSuperposition& st, const DissipativeMatrix& dm,
                                 double t, const std::vector<std::string>& groups, int focus,
                                 EntropyKernel kernel, bool& agree) {
  std::vector<double> row{t};
  const int n = st.oscillators();
  const auto ev = evolve_coherent(st, propagator(dm, t));
  if (has(groups, "P_R")) row.push_back(recurrence_probability(ev, focus));
  if (has(groups, "P_T"))
    for (int m = 0; m < n; ++m)
      if (m != focus) row.push_back(transfer_probability(ev, focus, m));
  if (has(groups, "entropy")) {
    const auto rep = linear_entropies(st, dm, t, focus, kernel);
    agree = rep.kernels_agree;
    row.insert(row.end(), {rep.s_full, rep.s_single, rep.s_rest, rep.excess});
  }
  if (has(groups, "coherence"))
    for (const auto& f : decoherence_coefficients(ev)) row.insert(row.end(), {f.magnitude, f.real});
  if (has(groups, "populations"))
    for (double p : mean_photons(ev)) row.push_back(p);
  return row;
}

struct FockContext {
  int levels = 0;
  oracle::DensityMatrix initial_focus;
};

std::vector<double> fock_row(const FockSuperposition& st, const DissipativeMatrix& dm, double t,
                             const std::vector<std::string>& groups, int focus,
                             const FockContext& ctx) {
  std::vector<double> row{t};
  const int n = st.oscillators;
  const auto fe = evolve_fock(st, propagator(dm, t), ctx.levels);
  const auto& state = fe.state;
  if (has(groups, "P_R"))
    row.push_back(oracle::overlap_fidelity(oracle::partial_trace(state, {focus}).rho,
                                           ctx.initial_focus.rho));
  if (has(groups, "P_T"))
    for (int m = 0; m < n; ++m)
      if (m != focus)
        row.push_back(oracle::overlap_fidelity(oracle::partial_trace(state, {m}).rho,
                                               ctx.initial_focus.rho));
  if (has(groups, "entropy")) {
    const double s_full = linear_entropy(state.rho);
    const double s_single = linear_entropy(oracle::partial_trace(state, {focus}).rho);
    double s_rest = 0.0;
    if (n > 1) {
      std::vector<int> rest;
      for (int m = 0; m < n; ++m)
        if (m != focus) rest.push_back(m);
      s_rest = linear_entropy(oracle::partial_trace(state, rest).rho);
    }
    row.insert(row.end(), {s_full, s_single, s_rest, s_single + s_rest - s_full});
  }
  if (has(groups, "populations"))
    for (double p : oracle::mean_photon_numbers(state)) row.push_back(p);
  return row;
}

std::size_t checked_power(int base, int exponent, std::size_t cap) {
  std::size_t d = 1;
  for (int k = 0; k < exponent; ++k) {
    if (d > cap / static_cast<std::size_t>(base) + 1) return cap + 1;
    d *= static_cast<std::size_t>(base);
  }
  return d;
}

std::vector<std::string> damping_warnings(const NetworkMatrices& nm, const DissipativeMatrix& dm) {
  std::vector<std::string> w;
  if (nm.damping.symmetrized)
    w.push_back("damping matrix symmetrized (asymmetry " + num(nm.damping.asymmetry) + ")");
  if (!nm.psd.is_psd)
    w.push_back("damping matrix is not positive semidefinite (min eigenvalue " +
                num(nm.psd.min_eigenvalue) + ")");
  if (dm.use_expm)
    w.push_back("eigenvector matrix of H^D ill-conditioned (condition " + num(dm.condition) +
                "); propagating with the matrix exponential");
  return w;
}

}  // namespace

std::vector<double> make_time_grid(const TimeGrid& grid) {
  if (!std::isfinite(grid.t0) || !std::isfinite(grid.t1) || !std::isfinite(grid.dt))
    throw ValidationError("time grid: t0, t1 and dt must be finite");
  if (!(grid.dt > 0.0)) throw ValidationError("time grid: dt must be positive");
  if (grid.t1 < grid.t0) throw ValidationError("time grid: empty (t1 < t0)");
  const double span = (grid.t1 - grid.t0) / grid.dt;
  if (span > 1e7) throw ValidationError("time grid: more than 1e7 points");
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  std::vector<double> times(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k)
    times[static_cast<std::size_t>(k)] = grid.t0 + static_cast<double>(k) * grid.dt;
  return times;
}

std::vector<std::string> observable_names() { return kGroups; }

std::vector<std::string> table_columns(const std::vector<std::string>& groups, int oscillators,
                                       int focus, int branches) {
  std::vector<std::string> cols{"t"};
  if (has(groups, "P_R")) cols.push_back("P_R");
  if (has(groups, "P_T"))
    for (int m = 0; m < oscillators; ++m)
      if (m != focus) cols.push_back("P_T_" + std::to_string(m + 1));
  if (has(groups, "entropy")) cols.insert(cols.end(), {"S_full", "S_single", "S_rest", "E"});
  if (has(groups, "coherence"))
    for (int r = 0; r < branches; ++r)
      for (int s = r + 1; s < branches; ++s) {
        const std::string pair = std::to_string(r + 1) + "_" + std::to_string(s + 1);
        cols.push_back("w_abs_" + pair);
        cols.push_back("w_re_" + pair);
      }
  if (has(groups, "populations"))
    for (int m = 0; m < oscillators; ++m) cols.push_back("n_" + std::to_string(m + 1));
  return cols;
}

std::string to_csv(const TimeSeriesTable& table) {
  if (table.columns.empty()) throw ValidationError("table: missing header");
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  char buf[64];
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.columns.size())
      throw ValidationError("table: row " + std::to_string(r) + " has missing cells");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      std::snprintf(buf, sizeof buf, "%.16e", row[c]);
      out += buf;
    }
    out += '\n';
  }
  // Sweeps repeat the time axis per parameter tuple; only plain tables are
  // required to be strictly increasing.
  if (table.columns.front() == "t")
    for (std::size_t r = 1; r < table.rows.size(); ++r)
      if (!(table.rows[r][0] > table.rows[r - 1][0]))
        throw ValidationError("table: time column is not strictly increasing");
  return out;
}

SimulationResult simulate(const NetworkSpec& spec, const InitialState& state,
                          const std::vector<double>& times, const SimulationSettings& settings) {
  if (times.empty()) throw ValidationError("time grid: empty");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ValidationError("time grid: must be strictly increasing");
  const int n = spec.n;
  if (settings.focus < 0 || settings.focus >= n)
    throw ValidationError("focus: oscillator " + std::to_string(settings.focus + 1) +
                          " is not in the network");

  SimulationResult res;
  res.observables = resolve_groups(settings.observables, state);
  res.matrices = assemble(spec, settings.damping);
  res.dm = build_hd(res.matrices.h, res.matrices.damping.gamma, settings.spectral);
  res.warnings = damping_warnings(res.matrices, res.dm);
  res.table.columns = table_columns(res.observables, n, settings.focus, branch_count(state));
  res.table.rows.resize(times.size());

  std::vector<char> agree(times.size(), 1);
  if (const auto* coh = std::get_if<CoherentSuperposition>(&state)) {
    if (coh->oscillators() != n)
      throw ValidationError("state: label width does not match the network size");
    parallel_for(times.size(), settings.workers, [&](std::size_t k) {
      bool ok = true;
      res.table.rows[k] = coherent_row(*coh, res.dm, times[k], res.observables, settings.focus,
                                       settings.kernel, ok);
      agree[k] = ok;
    });
  } else {
    const auto& fock = std::get<FockSuperposition>(state);
    if (fock.oscillators != n)
      throw ValidationError("state: occupation width does not match the network size");
    FockContext ctx;
    ctx.levels = settings.cutoff > 0 ? settings.cutoff : fock.max_total() + 1;
    if (checked_power(ctx.levels, n, settings.max_dimension) > settings.max_dimension)
      throw ValidationError("cutoff: Fock dimension " + std::to_string(ctx.levels) + "^" +
                            std::to_string(n) + " exceeds the bound " +
                            std::to_string(settings.max_dimension));
    ctx.initial_focus =
        oracle::partial_trace(fock_density(fock, ctx.levels), {settings.focus});
    parallel_for(times.size(), settings.workers, [&](std::size_t k) {
      res.table.rows[k] = fock_row(fock, res.dm, times[k], res.observables, settings.focus, ctx);
    });
  }
  if (has(res.observables, "entropy")) {
    res.kernels_agree = std::all_of(agree.begin(), agree.end(), [](char c) { return c != 0; });
    if (!res.kernels_agree)
      res.warnings.push_back("entropy kernels paper and adjoint disagree; reporting " +
                             to_string(settings.kernel));
  }
  return res;
}

SweepParameter parse_sweep_parameter(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ValidationError("sweep parameter '" + text + "': expected name=values");
  SweepParameter p;
  p.name = text.substr(0, eq);
  if (p.name != "lambda" && p.name != "omega" && p.name != "overlap" &&
      p.name.rfind("gamma:", 0) != 0)
    throw ValidationError("sweep parameter '" + p.name +
                          "': expected lambda, omega, overlap or gamma:<model>");
  const std::string rhs = text.substr(eq + 1);
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
      throw ValidationError("sweep parameter '" + p.name + "': '" + s + "' is not a finite number");
    return v;
  };
  if (rhs.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(rhs);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    if (parts.size() != 3)
      throw ValidationError("sweep parameter '" + p.name + "': range must be start:stop:count");
    const double a = to_double(parts[0]);
    const double b = to_double(parts[1]);
    const double c = to_double(parts[2]);
    if (c < 1 || c != std::floor(c))
      throw ValidationError("sweep parameter '" + p.name + "': count must be a positive integer");
    const int count = static_cast<int>(c);
    for (int k = 0; k < count; ++k)
      p.values.push_back(count == 1 ? a : a + (b - a) * k / (count - 1));
  } else {
    std::stringstream ss(rhs);
    for (std::string tok; std::getline(ss, tok, ',');) p.values.push_back(to_double(tok));
  }
  if (p.values.empty()) throw ValidationError("sweep parameter '" + p.name + "': no values");
  return p;
}

NetworkSpec apply_sweep_value(const NetworkSpec& spec, const std::string& name, double value) {
  NetworkSpec out = spec;
  if (name == "lambda") {
    if (out.couplings.empty())
      throw ValidationError("sweep lambda: the network template has no couplings");
    for (auto& c : out.couplings) c.lambda = value;
  } else if (name == "omega") {
    for (auto& o : out.oscillators) o.omega = value;
  } else if (name == "overlap") {
    if (out.reservoir_mode != ReservoirMode::common)
      throw ValidationError("sweep overlap: requires reservoir_mode common");
    out.overlap = OverlapModel::uniform(out.n, value).rho;
  } else if (name.rfind("gamma:", 0) == 0) {
    const std::string id = name.substr(6);
    auto it = out.damping_models.find(id);
    if (it == out.damping_models.end())
      throw ValidationError("sweep " + name + ": no damping model '" + id + "'");
    std::visit(
        [&](auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, WhiteNoise>)
            m.rate = value;
          else
            m.gamma0 = value;
        },
        it->second.kind);
  } else {
    throw ValidationError("sweep parameter '" + name + "' is not supported");
  }
  validate(out);
  return out;
}

SweepResult sweep(const NetworkSpec& spec, const InitialState& state,
                  const std::vector<SweepParameter>& params, const std::vector<double>& times,
                  const SimulationSettings& settings, std::size_t max_points) {
  if (params.empty()) throw ValidationError("sweep: at least one parameter is required");
  std::size_t count = 1;
  for (const auto& p : params) {
    if (p.values.empty()) throw ValidationError("sweep parameter '" + p.name + "': no values");
    if (count > max_points / p.values.size() + 1) {
      count = max_points + 1;
      break;
    }
    count *= p.values.size();
  }
  if (count > max_points)
    throw ValidationError("sweep: grid has more than " + std::to_string(max_points) +
                          " points (raise --max-points)");

  SweepResult out;
  out.points.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rem = k;
    std::vector<double> values(params.size());
    for (std::size_t i = params.size(); i-- > 0;) {
      values[i] = params[i].values[rem % params[i].values.size()];
      rem /= params[i].values.size();
    }
    out.points[k].values = std::move(values);
  }

  // Specs are built serially so validation errors surface deterministically.
  std::vector<NetworkSpec> specs(count);
  for (std::size_t k = 0; k < count; ++k) {
    specs[k] = spec;
    for (std::size_t i = 0; i < params.size(); ++i)
      specs[k] = apply_sweep_value(specs[k], params[i].name, out.points[k].values[i]);
  }

  std::vector<SimulationResult> results(count);
  SimulationSettings inner = settings;
  inner.workers = 1;
  parallel_for(count, settings.workers, [&](std::size_t k) {
    results[k] = simulate(specs[k], state, times, inner);
  });

  for (const auto& p : params) out.table.columns.push_back(p.name);
  const auto& cols = results.front().table.columns;
  out.table.columns.insert(out.table.columns.end(), cols.begin(), cols.end());
  for (std::size_t k = 0; k < count; ++k) {
    auto& pt = out.points[k];
    pt.gamma = results[k].matrices.damping.gamma;
    pt.gamma_psd = results[k].matrices.psd.is_psd;
    pt.kernels_agree = results[k].kernels_agree;
    pt.warnings = results[k].warnings;
    for (const auto& row : results[k].table.rows) {
      std::vector<double> full = pt.values;
      full.insert(full.end(), row.begin(), row.end());
      out.table.rows.push_back(std::move(full));
    }
  }
  return out;
}

int automatic_cutoff(const InitialState& state) {
  if (const auto* fock = std::get_if<FockSuperposition>(&state))
    return std::max(2, fock->max_total() + 1);
  const auto& coh = std::get<CoherentSuperposition>(state);
  // Theta is a contraction for PSD damping, so no oscillator ever holds more
  // than the whole branch: |zeta_m|^2 <= sum_n |beta_n|^2.
  double mu = 0.0;
  for (int r = 0; r < coh.branches(); ++r) mu = std::max(mu, coh.labels.row(r).squaredNorm());
  double pmf = std::exp(-mu);
  double cdf = pmf;
  int levels = 1;
  while (1.0 - cdf > 1e-12 && levels < 200) {
    pmf *= mu / levels;
    cdf += pmf;
    ++levels;
  }
  return std::max(4, levels + 1);
}

CompareReport compare_with_oracle(const NetworkSpec& spec, const InitialState& state,
                                  std::vector<double> times, const CompareSettings& settings) {
  if (times.empty()) throw ValidationError("times: at least one comparison time is required");
  for (double t : times)
    if (!std::isfinite(t) || t < 0.0) throw ValidationError("times: must be finite and >= 0");
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (!(settings.tolerance > 0.0)) throw ValidationError("tolerance: must be positive");

  const int n = spec.n;
  const auto nm = assemble(spec, settings.damping);
  const auto dm = build_hd(nm.h, nm.damping.gamma, settings.spectral);

  CompareReport rep;
  rep.tolerance = settings.tolerance;
  rep.cutoff = settings.cutoff > 0 ? settings.cutoff : automatic_cutoff(state);
  if (rep.cutoff < 2) throw ValidationError("cutoff: need at least 2 levels per oscillator");
  rep.dimension = checked_power(rep.cutoff, n, settings.max_dimension);
  if (rep.dimension > settings.max_dimension)
    throw ValidationError("oracle dimension " + std::to_string(rep.cutoff) + "^" +
                          std::to_string(n) + " exceeds the bound " +
                          std::to_string(settings.max_dimension) +
                          "; lower --cutoff or raise --max-dimension");

  const FockBasis basis = FockBasis::uniform(n, rep.cutoff);
  const auto* coh = std::get_if<CoherentSuperposition>(&state);
  const auto* fock = std::get_if<FockSuperposition>(&state);
  if (coh && coh->oscillators() != n)
    throw ValidationError("state: label width does not match the network size");
  if (fock && fock->oscillators != n)
    throw ValidationError("state: occupation width does not match the network size");

  const ComplexMatrix rho0 = coh ? to_density_matrix(evolve_coherent(*coh, propagator(dm, 0.0)), basis)
                                 : fock_density(*fock, rep.cutoff).rho;

  rep.frame = nm.h.diagonal().mean();
  const oracle::LindbladGenerator gen(basis, nm.h, nm.damping.gamma, {}, rep.frame);
  rep.dt = settings.dt > 0.0 ? settings.dt : oracle::recommended_dt(gen);
  oracle::IntegrationOptions opts;
  opts.dt = rep.dt;
  opts.sample_times = times;
  opts.track_positivity = true;
  const auto traj = oracle::integrate(gen, rho0, times.back(), opts);
  rep.oracle_stats = traj.stats;

  rep.times = times;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const Propagator p = settings.flip_theta ? propagator_flipped(dm, t) : propagator(dm, t);
    ComplexMatrix closed;
    if (coh) {
      closed = to_density_matrix(evolve_coherent(*coh, p), basis);
      rep.closed_form_truncation =
          std::max(rep.closed_form_truncation, std::abs(1.0 - closed.trace().real()));
    } else {
      closed = evolve_fock(*fock, p, rep.cutoff).state.rho;
    }
    const double d = oracle::trace_distance(closed, traj.states[k]);
    rep.trace_distance.push_back(d);
    rep.max_trace_distance = std::max(rep.max_trace_distance, d);
  }
  rep.pass = rep.max_trace_distance <= rep.tolerance;
  return rep;
}

}  // namespace bosonet
