#include "bosonet/state_io.hpp"

#include <json.hpp>

#include "json_util.hpp"

namespace bosonet {

using nlohmann::json;
using detail::check_keys;
using detail::get_complex;
using detail::get_string;

namespace {

CoherentSuperposition parse_coherent(const json& st, int oscillators) {
  check_keys(st, {"kind", "branches"}, "state");
  if (!st.contains("branches") || !st.at("branches").is_array())
    throw ValidationError("state.branches: expected an array");
  const auto& branches = st.at("branches");
  if (branches.empty()) throw ValidationError("state.branches: need at least one branch");
  const auto q = static_cast<Eigen::Index>(branches.size());
  ComplexVector amps(q);
  ComplexMatrix labels(q, oscillators);
  for (std::size_t r = 0; r < branches.size(); ++r) {
    const std::string where = "state.branches[" + std::to_string(r) + "]";
    const auto& b = branches[r];
    if (!b.is_object()) throw ValidationError(where + ": expected an object");
    check_keys(b, {"amplitude", "labels"}, where);
    if (!b.contains("amplitude")) throw ValidationError(where + ".amplitude: missing required key");
    amps(static_cast<Eigen::Index>(r)) = get_complex(b.at("amplitude"), where + ".amplitude");
    if (!b.contains("labels") || !b.at("labels").is_array())
      throw ValidationError(where + ".labels: expected an array");
    const auto& ls = b.at("labels");
    if (static_cast<int>(ls.size()) != oscillators)
      throw ValidationError(where + ".labels: expected " + std::to_string(oscillators) +
                            " entries (one per oscillator)");
    for (std::size_t m = 0; m < ls.size(); ++m)
      labels(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) =
          get_complex(ls[m], where + ".labels[" + std::to_string(m) + "]");
  }
  return normalize_superposition(std::move(amps), std::move(labels));
}

FockSuperposition parse_fock(const json& st, int oscillators) {
  check_keys(st, {"kind", "terms"}, "state");
  if (!st.contains("terms") || !st.at("terms").is_array())
    throw ValidationError("state.terms: expected an array");
  FockSuperposition out;
  out.oscillators = oscillators;
  const auto& terms = st.at("terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string where = "state.terms[" + std::to_string(i) + "]";
    const auto& t = terms[i];
    if (!t.is_object()) throw ValidationError(where + ": expected an object");
    check_keys(t, {"occupation", "amplitude"}, where);
    if (!t.contains("occupation") || !t.at("occupation").is_array())
      throw ValidationError(where + ".occupation: expected an array of integers");
    std::vector<int> occ;
    for (const auto& x : t.at("occupation")) {
      if (!x.is_number_integer() || x.get<int>() < 0)
        throw ValidationError(where + ".occupation: expected non-negative integers");
      occ.push_back(x.get<int>());
    }
    if (static_cast<int>(occ.size()) != oscillators)
      throw ValidationError(where + ".occupation: expected " + std::to_string(oscillators) +
                            " entries");
    if (!t.contains("amplitude")) throw ValidationError(where + ".amplitude: missing required key");
    if (out.amplitudes.count(occ))
      throw ValidationError(where + ".occupation: duplicate occupation tuple");
    out.amplitudes[occ] = get_complex(t.at("amplitude"), where + ".amplitude");
  }
  return normalize(std::move(out));
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

}  // namespace

InitialState parse_state(std::string_view text, int oscillators) {
  const json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ValidationError("$: state document must be a JSON object");
  check_keys(doc, {"state"}, "$");
  if (!doc.contains("state") || !doc.at("state").is_object())
    throw ValidationError("state: missing state block");
  const auto& st = doc.at("state");
  const std::string kind = get_string(st, "kind", "state");
  if (kind == "coherent_superposition") return parse_coherent(st, oscillators);
  if (kind == "fock_superposition") return parse_fock(st, oscillators);
  throw ValidationError("state.kind: expected coherent_superposition or fock_superposition");
}

InitialState load_state_file(const std::string& path, int oscillators) {
  return parse_state(detail::read_file(path), oscillators);
}

std::string serialize_state(const InitialState& state, int indent) {
  json st;
  if (const auto* c = std::get_if<CoherentSuperposition>(&state)) {
    st["kind"] = "coherent_superposition";
    json branches = json::array();
    for (Eigen::Index r = 0; r < c->amplitudes.size(); ++r) {
      json labels = json::array();
      for (Eigen::Index m = 0; m < c->labels.cols(); ++m) labels.push_back(complex_json(c->labels(r, m)));
      branches.push_back({{"amplitude", complex_json(c->amplitudes(r))}, {"labels", labels}});
    }
    st["branches"] = branches;
  } else {
    const auto& f = std::get<FockSuperposition>(state);
    st["kind"] = "fock_superposition";
    json terms = json::array();
    for (const auto& [occ, amp] : f.amplitudes)
      terms.push_back({{"occupation", occ}, {"amplitude", complex_json(amp)}});
    st["terms"] = terms;
  }
  return json{{"state", st}}.dump(indent) + "\n";
}

}  // namespace bosonet
