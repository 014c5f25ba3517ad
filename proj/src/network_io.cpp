#include "bosonet/network_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "json_util.hpp"

namespace bosonet {

using nlohmann::json;
using detail::check_keys;
using detail::get_int;
using detail::get_number;
using detail::get_string;

namespace {

DampingModel parse_model(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  const std::string kind = get_string(j, "kind", where);
  if (kind == "white_noise") {
    check_keys(j, {"kind", "gamma"}, where);
    return {WhiteNoise{get_number(j, "gamma", where)}};
  }
  if (kind == "power_law") {
    check_keys(j, {"kind", "gamma0", "omega_ref", "s"}, where);
    return {PowerLaw{get_number(j, "gamma0", where), get_number(j, "omega_ref", where),
                     get_number(j, "s", where)}};
  }
  if (kind == "lorentzian") {
    check_keys(j, {"kind", "gamma0", "omega_c", "width"}, where);
    return {Lorentzian{get_number(j, "gamma0", where), get_number(j, "omega_c", where),
                       get_number(j, "width", where)}};
  }
  throw ValidationError(where + ".kind: unknown damping model kind '" + kind + "'");
}

json dump_model(const DampingModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, WhiteNoise>)
          return {{"kind", "white_noise"}, {"gamma", m.rate}};
        else if constexpr (std::is_same_v<T, PowerLaw>)
          return {{"kind", "power_law"}, {"gamma0", m.gamma0}, {"omega_ref", m.omega_ref},
                  {"s", m.exponent}};
        else
          return {{"kind", "lorentzian"}, {"gamma0", m.gamma0}, {"omega_c", m.omega_c},
                  {"width", m.width}};
      },
      model.kind);
}

Reservoir parse_reservoir(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "none") return {};
    throw ValidationError(where + ": string form only accepts \"none\"");
  }
  if (!j.is_object()) throw ValidationError(where + ": expected \"none\" or an object");
  const std::string kind = get_string(j, "kind", where);
  if (kind == "none") {
    check_keys(j, {"kind"}, where);
    return {};
  }
  check_keys(j, {"kind", "model"}, where);
  Reservoir r;
  if (kind == "distinct")
    r.kind = ReservoirKind::distinct;
  else if (kind == "common")
    r.kind = ReservoirKind::common;
  else
    throw ValidationError(where + ".kind: expected none, distinct or common");
  r.model = get_string(j, "model", where);
  return r;
}

const char* reservoir_name(ReservoirKind k) {
  switch (k) {
    case ReservoirKind::none: return "none";
    case ReservoirKind::distinct: return "distinct";
    case ReservoirKind::common: return "common";
  }
  return "none";
}

}  // namespace

NetworkSpec parse_network(std::string_view text) {
  const json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ValidationError("$: network document must be a JSON object");
  check_keys(doc, {"n", "oscillators", "couplings", "reservoir_mode", "damping_models", "overlap"},
             "$");

  NetworkSpec spec;
  spec.n = get_int(doc, "n", "$");

  if (doc.contains("reservoir_mode")) {
    const std::string mode = get_string(doc, "reservoir_mode", "$");
    if (mode == "distinct")
      spec.reservoir_mode = ReservoirMode::distinct;
    else if (mode == "common")
      spec.reservoir_mode = ReservoirMode::common;
    else
      throw ValidationError("reservoir_mode: expected distinct or common");
  }

  if (doc.contains("damping_models")) {
    const auto& models = doc.at("damping_models");
    if (!models.is_object()) throw ValidationError("damping_models: expected an object");
    for (const auto& [id, m] : models.items())
      spec.damping_models[id] = parse_model(m, "damping_models." + id);
  }

  if (!doc.contains("oscillators")) throw ValidationError("oscillators: missing required key");
  const auto& oscs = doc.at("oscillators");
  if (!oscs.is_array()) throw ValidationError("oscillators: expected an array");
  for (std::size_t i = 0; i < oscs.size(); ++i) {
    const std::string where = "oscillators[" + std::to_string(i) + "]";
    const auto& o = oscs[i];
    if (!o.is_object()) throw ValidationError(where + ": expected an object");
    check_keys(o, {"index", "omega", "reservoir"}, where);
    OscillatorSpec os;
    os.index = get_int(o, "index", where);
    os.omega = get_number(o, "omega", where);
    if (o.contains("reservoir")) os.reservoir = parse_reservoir(o.at("reservoir"), where + ".reservoir");
    spec.oscillators.push_back(os);
  }

  if (doc.contains("couplings")) {
    const auto& cs = doc.at("couplings");
    if (!cs.is_array()) throw ValidationError("couplings: expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string where = "couplings[" + std::to_string(i) + "]";
      const auto& c = cs[i];
      if (!c.is_object()) throw ValidationError(where + ": expected an object");
      check_keys(c, {"m", "n", "lambda"}, where);
      spec.couplings.push_back(
          {get_int(c, "m", where), get_int(c, "n", where), get_number(c, "lambda", where)});
    }
  }

  if (doc.contains("overlap")) {
    const auto& ov = doc.at("overlap");
    if (ov.is_number()) {
      const double v = ov.get<double>();
      RealMatrix rho = RealMatrix::Constant(std::max(spec.n, 0), std::max(spec.n, 0), v);
      rho.diagonal().setOnes();
      spec.overlap = rho;
    } else if (ov.is_array()) {
      RealMatrix rho(static_cast<Eigen::Index>(ov.size()),
                     ov.empty() ? 0 : static_cast<Eigen::Index>(ov[0].size()));
      for (std::size_t i = 0; i < ov.size(); ++i) {
        const std::string where = "overlap[" + std::to_string(i) + "]";
        if (!ov[i].is_array() || static_cast<Eigen::Index>(ov[i].size()) != rho.cols())
          throw ValidationError(where + ": expected a row of " + std::to_string(rho.cols()) +
                                " numbers");
        for (std::size_t j = 0; j < ov[i].size(); ++j) {
          if (!ov[i][j].is_number())
            throw ValidationError(where + "[" + std::to_string(j) + "]: expected a number");
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ov[i][j].get<double>();
        }
      }
      spec.overlap = rho;
    } else {
      throw ValidationError("overlap: expected a number or an n x n array");
    }
  }

  validate(spec);
  return spec;
}

std::string serialize_network(const NetworkSpec& spec, int indent) {
  json doc;
  doc["n"] = spec.n;
  doc["reservoir_mode"] = spec.reservoir_mode == ReservoirMode::common ? "common" : "distinct";
  json oscs = json::array();
  for (const auto& o : spec.oscillators) {
    json r = {{"kind", reservoir_name(o.reservoir.kind)}};
    if (o.reservoir.kind != ReservoirKind::none) r["model"] = o.reservoir.model;
    oscs.push_back({{"index", o.index}, {"omega", o.omega}, {"reservoir", r}});
  }
  doc["oscillators"] = oscs;
  json cs = json::array();
  for (const auto& c : spec.couplings) cs.push_back({{"m", c.m}, {"n", c.n}, {"lambda", c.lambda}});
  doc["couplings"] = cs;
  json models = json::object();
  for (const auto& [id, m] : spec.damping_models) models[id] = dump_model(m);
  doc["damping_models"] = models;
  if (spec.overlap) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < spec.overlap->rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < spec.overlap->cols(); ++j) row.push_back((*spec.overlap)(i, j));
      rows.push_back(row);
    }
    doc["overlap"] = rows;
  }
  return doc.dump(indent) + "\n";
}

NetworkSpec load_network_file(const std::string& path) {
  return parse_network(detail::read_file(path));
}

}  // namespace bosonet
