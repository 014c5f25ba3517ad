#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "bosonet/coherent.hpp"
#include "bosonet/fock.hpp"

namespace bosonet {

using InitialState = std::variant<CoherentSuperposition, FockSuperposition>;

// Document shape: {"state": {"kind": "coherent_superposition", "branches": [...]}}
// or {"state": {"kind": "fock_superposition", "terms": [...]}}. `oscillators`
// is the network size every label row / occupation tuple must match.
InitialState parse_state(std::string_view text, int oscillators);
InitialState load_state_file(const std::string& path, int oscillators);

std::string serialize_state(const InitialState& state, int indent = 2);

}  // namespace bosonet
