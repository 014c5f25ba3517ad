#pragma once

#include <string>
#include <string_view>

#include "bosonet/topology.hpp"

namespace bosonet {

// Parses and validates a network document. Syntax problems raise ParseError
// with 1-based line/column; schema and invariant violations raise
// ValidationError whose message starts with the JSON path of the field.
NetworkSpec parse_network(std::string_view text);

// Canonical JSON text; parse_network(serialize_network(s)) == s.
std::string serialize_network(const NetworkSpec& spec, int indent = 2);

NetworkSpec load_network_file(const std::string& path);

}  // namespace bosonet
