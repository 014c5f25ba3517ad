#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bosonet/damping_model.hpp"
#include "bosonet/types.hpp"

namespace bosonet {

enum class ReservoirKind { none, distinct, common };
enum class ReservoirMode { distinct, common };

struct Reservoir {
  ReservoirKind kind = ReservoirKind::none;
  // Damping model id for `distinct`; coupling-profile id for `common`.
  // Both refer into NetworkSpec::damping_models.
  std::string model;
  bool operator==(const Reservoir&) const = default;
};

struct OscillatorSpec {
  int index = 1;  // 1-based
  double omega = 1.0;
  Reservoir reservoir;
  bool operator==(const OscillatorSpec&) const = default;
};

struct CouplingSpec {
  int m = 1;
  int n = 2;
  double lambda = 0.0;
  bool operator==(const CouplingSpec&) const = default;
};

struct NetworkSpec {
  int n = 1;
  std::vector<OscillatorSpec> oscillators;  // sorted by index after validate()
  std::vector<CouplingSpec> couplings;
  ReservoirMode reservoir_mode = ReservoirMode::distinct;
  std::map<std::string, DampingModel> damping_models;
  // Correlation coefficients between coupling profiles of a common reservoir.
  // Empty means "fully correlated" (every off-diagonal entry 1).
  std::optional<RealMatrix> overlap;

  bool operator==(const NetworkSpec& other) const;
};

// Throws ValidationError naming the offending field. Sorts oscillators by
// index and normalizes every coupling to m < n.
void validate(NetworkSpec& spec);

// Real symmetric N x N matrix: omega_m on the diagonal, lambda_mn off it.
RealMatrix build_coupling_matrix(const NetworkSpec& spec);

enum class TopologyKind { symmetric, central, circular, linear };

std::optional<TopologyKind> topology_kind_from_string(const std::string& s);
std::string to_string(TopologyKind kind);

// Uniform frequency and coupling.
NetworkSpec generate_topology(TopologyKind kind, int n, double omega, double lambda);

// Heterogeneous variant: `omega` has one entry per oscillator, and
// `lambda(m, n)` (1-based, m < n) is read for each edge of the pattern.
NetworkSpec generate_topology(TopologyKind kind, const std::vector<double>& omega,
                              const RealMatrix& lambda);

// Edge list (m < n, 1-based) of a topology pattern. Central hub is oscillator 1.
std::vector<std::pair<int, int>> topology_edges(TopologyKind kind, int n);

// Attaches a distinct white-noise reservoir with the given rate to every
// oscillator, registering the model under `model_id`.
void attach_white_noise(NetworkSpec& spec, double rate, const std::string& model_id = "white");

}  // namespace bosonet
