#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace bosonet::cli {

// Process exit codes.
enum Exit : int {
  ok = 0,
  parse_error = 1,       // unreadable file, bad JSON, bad command line
  validation_error = 2,  // well-formed input violating an invariant
  numerical_error = 3,   // decomposition or integration failure
  comparison_failed = 4, // compare-oracle exceeded its tolerance
};

// Runs one command line. Results go to `out` when no --out file is given;
// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// 64-bit FNV-1a, used for input/output fingerprints in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace bosonet::cli
