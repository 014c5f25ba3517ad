#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bosonet/dissipation.hpp"
#include "bosonet/entropy.hpp"
#include "bosonet/oracle.hpp"
#include "bosonet/spectral.hpp"
#include "bosonet/state_io.hpp"
#include "bosonet/topology.hpp"

namespace bosonet {

// t0, t0 + dt, ..., up to t1 inclusive (points within 1e-9 dt of t1 count).
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.1;
};

// Throws ValidationError for non-finite input, dt <= 0, or t1 < t0.
std::vector<double> make_time_grid(const TimeGrid& grid);

// Observable groups, by name: "P_R", "P_T", "entropy", "coherence", "populations".
std::vector<std::string> observable_names();

struct SimulationSettings {
  int focus = 0;  // 0-based source oscillator for P_R, P_T and the entropy split
  EntropyKernel kernel = EntropyKernel::adjoint;
  DampingOptions damping;
  SpectralTolerances spectral;
  // Fock states only: levels per oscillator, 0 = max total photons + 1.
  int cutoff = 0;
  std::size_t max_dimension = 4096;
  // Empty = every group applicable to the state kind.
  std::vector<std::string> observables;
  int workers = 0;  // 0 = OpenMP default
};

// Time column first, then named observables.
struct TimeSeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Full-precision CSV (%.16e). Throws ValidationError unless the time column
// is strictly increasing and every row is complete.
std::string to_csv(const TimeSeriesTable& table);

struct SimulationResult {
  TimeSeriesTable table;
  NetworkMatrices matrices;
  DissipativeMatrix dm;
  std::vector<std::string> observables;  // resolved groups
  bool kernels_agree = true;             // entropy group only
  std::vector<std::string> warnings;
};

SimulationResult simulate(const NetworkSpec& spec, const InitialState& state,
                          const std::vector<double>& times, const SimulationSettings& settings);

// Column names produced for a given resolved observable list (schema is a
// pure function of the groups, N, the focus and the branch count Q).
std::vector<std::string> table_columns(const std::vector<std::string>& groups, int oscillators,
                                       int focus, int branches);

// --- sweeps ---------------------------------------------------------------

// name is one of "lambda", "omega", "overlap", "gamma:<model id>".
struct SweepParameter {
  std::string name;
  std::vector<double> values;
};

// Parses "name=v1,v2,..." or "name=start:stop:count".
SweepParameter parse_sweep_parameter(const std::string& text);

// Applies one parameter value to a copy of the template and revalidates.
NetworkSpec apply_sweep_value(const NetworkSpec& spec, const std::string& name, double value);

struct SweepPoint {
  std::vector<double> values;  // one per parameter
  RealMatrix gamma;
  bool gamma_psd = true;
  bool kernels_agree = true;
  std::vector<std::string> warnings;
};

struct SweepResult {
  TimeSeriesTable table;  // parameter columns, then the simulate columns
  std::vector<SweepPoint> points;
};

// Cartesian product in parameter order (last parameter varies fastest).
// Throws ValidationError when the point count exceeds max_points.
SweepResult sweep(const NetworkSpec& spec, const InitialState& state,
                  const std::vector<SweepParameter>& params, const std::vector<double>& times,
                  const SimulationSettings& settings, std::size_t max_points = 1000);

// --- oracle comparison ----------------------------------------------------

struct CompareSettings {
  int cutoff = 0;          // levels per oscillator, 0 = automatic
  double tolerance = 1e-5;
  bool flip_theta = false; // negative control: propagate with exp(+HD t)
  double dt = 0.0;         // 0 = oracle::recommended_dt
  std::size_t max_dimension = 4096;
  DampingOptions damping;
  SpectralTolerances spectral;
};

struct CompareReport {
  std::vector<double> times;
  std::vector<double> trace_distance;
  double max_trace_distance = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int cutoff = 0;
  std::size_t dimension = 0;
  double frame = 0.0;
  double dt = 0.0;
  double closed_form_truncation = 0.0;  // 1 - trace of the truncated closed form, max over times
  oracle::IntegrationStats oracle_stats;
};

// Levels per oscillator large enough that every coherent branch loses less
// than 1e-12 of its weight to the truncation.
int automatic_cutoff(const InitialState& state);

// Throws ValidationError (with advice) when the oracle dimension exceeds
// settings.max_dimension.
CompareReport compare_with_oracle(const NetworkSpec& spec, const InitialState& state,
                                  std::vector<double> times, const CompareSettings& settings);

}  // namespace bosonet
