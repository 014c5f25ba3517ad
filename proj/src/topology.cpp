#include "bosonet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bosonet {

namespace {

std::string path(const std::string& array, std::size_t i, const std::string& field) {
  std::ostringstream os;
  os << array << "[" << i << "]." << field;
  return os.str();
}

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ValidationError(field + ": " + msg);
}

void validate_model(const std::string& id, const DampingModel& model) {
  const std::string where = "damping_models." + id;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, WhiteNoise>) {
          require(std::isfinite(m.rate), where + ".gamma", "must be finite");
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          require(std::isfinite(m.gamma0), where + ".gamma0", "must be finite");
          require(std::isfinite(m.omega_ref) && m.omega_ref > 0.0, where + ".omega_ref",
                  "must be a positive finite frequency");
          require(std::isfinite(m.exponent), where + ".s", "must be finite");
        } else {
          require(std::isfinite(m.gamma0), where + ".gamma0", "must be finite");
          require(std::isfinite(m.omega_c), where + ".omega_c", "must be finite");
          require(std::isfinite(m.width) && m.width > 0.0, where + ".width",
                  "must be a positive finite frequency");
        }
      },
      model.kind);
}

}  // namespace

bool NetworkSpec::operator==(const NetworkSpec& other) const {
  if (n != other.n || oscillators != other.oscillators || couplings != other.couplings ||
      reservoir_mode != other.reservoir_mode || damping_models != other.damping_models ||
      overlap.has_value() != other.overlap.has_value())
    return false;
  if (!overlap) return true;
  return overlap->rows() == other.overlap->rows() && overlap->cols() == other.overlap->cols() &&
         *overlap == *other.overlap;
}

void validate(NetworkSpec& spec) {
  require(spec.n >= 1, "n", "network needs at least one oscillator");
  require(spec.oscillators.size() == static_cast<std::size_t>(spec.n), "oscillators",
          "expected " + std::to_string(spec.n) + " entries, found " +
              std::to_string(spec.oscillators.size()));

  std::set<int> seen;
  for (std::size_t i = 0; i < spec.oscillators.size(); ++i) {
    const auto& o = spec.oscillators[i];
    require(o.index >= 1 && o.index <= spec.n, path("oscillators", i, "index"),
            "must lie in 1.." + std::to_string(spec.n));
    require(seen.insert(o.index).second, path("oscillators", i, "index"),
            "duplicate index " + std::to_string(o.index));
    require(std::isfinite(o.omega) && o.omega > 0.0, path("oscillators", i, "omega"),
            "frequency must be positive");
    const auto& r = o.reservoir;
    switch (r.kind) {
      case ReservoirKind::none:
        require(r.model.empty(), path("oscillators", i, "reservoir"),
                "reservoir 'none' takes no model");
        break;
      case ReservoirKind::distinct:
        require(spec.reservoir_mode == ReservoirMode::distinct, path("oscillators", i, "reservoir"),
                "distinct reservoir in a network with reservoir_mode 'common'");
        break;
      case ReservoirKind::common:
        require(spec.reservoir_mode == ReservoirMode::common, path("oscillators", i, "reservoir"),
                "common reservoir in a network with reservoir_mode 'distinct'");
        break;
    }
    if (r.kind != ReservoirKind::none)
      require(spec.damping_models.count(r.model) == 1, path("oscillators", i, "reservoir.model"),
              "unknown damping model '" + r.model + "'");
  }
  std::sort(spec.oscillators.begin(), spec.oscillators.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });

  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
    auto& c = spec.couplings[i];
    require(c.m != c.n, path("couplings", i, "m"), "self-coupling forbidden");
    require(c.m >= 1 && c.m <= spec.n, path("couplings", i, "m"),
            "endpoint out of range 1.." + std::to_string(spec.n));
    require(c.n >= 1 && c.n <= spec.n, path("couplings", i, "n"),
            "endpoint out of range 1.." + std::to_string(spec.n));
    require(std::isfinite(c.lambda), path("couplings", i, "lambda"), "must be finite");
    if (c.m > c.n) std::swap(c.m, c.n);
    require(pairs.insert({c.m, c.n}).second, path("couplings", i, "m"),
            "duplicate coupling (" + std::to_string(c.m) + "," + std::to_string(c.n) + ")");
  }
  std::sort(spec.couplings.begin(), spec.couplings.end(),
            [](const auto& a, const auto& b) { return std::pair{a.m, a.n} < std::pair{b.m, b.n}; });

  for (const auto& [id, model] : spec.damping_models) validate_model(id, model);

  if (spec.overlap) {
    require(spec.reservoir_mode == ReservoirMode::common, "overlap",
            "only meaningful with reservoir_mode 'common'");
    const auto& rho = *spec.overlap;
    require(rho.rows() == spec.n && rho.cols() == spec.n, "overlap",
            "must be an n x n matrix");
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < spec.n; ++j) {
        const std::string where = "overlap[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        require(std::isfinite(rho(i, j)) && rho(i, j) >= 0.0 && rho(i, j) <= 1.0, where,
                "must lie in [0, 1]");
        require(rho(i, j) == rho(j, i), where, "overlap must be symmetric");
        if (i == j) require(rho(i, i) == 1.0, where, "diagonal must be 1");
      }
  }
}

RealMatrix build_coupling_matrix(const NetworkSpec& spec) {
  RealMatrix h = RealMatrix::Zero(spec.n, spec.n);
  for (const auto& o : spec.oscillators) h(o.index - 1, o.index - 1) = o.omega;
  for (const auto& c : spec.couplings) {
    h(c.m - 1, c.n - 1) = c.lambda;
    h(c.n - 1, c.m - 1) = c.lambda;
  }
  return h;
}

std::optional<TopologyKind> topology_kind_from_string(const std::string& s) {
  if (s == "symmetric") return TopologyKind::symmetric;
  if (s == "central") return TopologyKind::central;
  if (s == "circular") return TopologyKind::circular;
  if (s == "linear") return TopologyKind::linear;
  return std::nullopt;
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::symmetric: return "symmetric";
    case TopologyKind::central: return "central";
    case TopologyKind::circular: return "circular";
    case TopologyKind::linear: return "linear";
  }
  return "?";
}

std::vector<std::pair<int, int>> topology_edges(TopologyKind kind, int n) {
  const int min_n = kind == TopologyKind::circular ? 3 : 2;
  if (n < min_n)
    throw ValidationError("n: " + to_string(kind) + " topology needs at least " +
                          std::to_string(min_n) + " oscillators");
  std::vector<std::pair<int, int>> edges;
  switch (kind) {
    case TopologyKind::symmetric:
      for (int m = 1; m <= n; ++m)
        for (int k = m + 1; k <= n; ++k) edges.emplace_back(m, k);
      break;
    case TopologyKind::central:
      for (int k = 2; k <= n; ++k) edges.emplace_back(1, k);
      break;
    case TopologyKind::circular:
    case TopologyKind::linear:
      for (int m = 1; m < n; ++m) edges.emplace_back(m, m + 1);
      if (kind == TopologyKind::circular) edges.emplace_back(1, n);
      break;
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

NetworkSpec generate_topology(TopologyKind kind, const std::vector<double>& omega,
                              const RealMatrix& lambda) {
  const int n = static_cast<int>(omega.size());
  const auto edges = topology_edges(kind, n);
  if (lambda.rows() != n || lambda.cols() != n)
    throw ValidationError("lambda: expected an n x n matrix of strengths");
  NetworkSpec spec;
  spec.n = n;
  for (int m = 1; m <= n; ++m) spec.oscillators.push_back({m, omega[m - 1], {}});
  for (auto [m, k] : edges) spec.couplings.push_back({m, k, lambda(m - 1, k - 1)});
  validate(spec);
  return spec;
}

NetworkSpec generate_topology(TopologyKind kind, int n, double omega, double lambda) {
  if (n < 1) throw ValidationError("n: must be positive");
  return generate_topology(kind, std::vector<double>(static_cast<std::size_t>(n), omega),
                           RealMatrix::Constant(n, n, lambda));
}

void attach_white_noise(NetworkSpec& spec, double rate, const std::string& model_id) {
  spec.reservoir_mode = ReservoirMode::distinct;
  spec.damping_models[model_id] = DampingModel{WhiteNoise{rate}};
  for (auto& o : spec.oscillators) o.reservoir = {ReservoirKind::distinct, model_id};
}

}  // namespace bosonet
