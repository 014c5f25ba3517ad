#pragma once

#include <string>
#include <variant>

namespace bosonet {

// Frequency-flat spectral density: gamma(w) = rate.
struct WhiteNoise {
  double rate = 0.0;
  bool operator==(const WhiteNoise&) const = default;
};

// gamma(w) = gamma0 * (w / omega_ref)^exponent for w > 0, and 0 for w <= 0
// (a reservoir has no modes at non-positive frequency).
struct PowerLaw {
  double gamma0 = 0.0;
  double omega_ref = 1.0;
  double exponent = 0.0;
  bool operator==(const PowerLaw&) const = default;
};

// Peak rate gamma0 at omega_c; width is the full width at half maximum.
struct Lorentzian {
  double gamma0 = 0.0;
  double omega_c = 1.0;
  double width = 1.0;
  bool operator==(const Lorentzian&) const = default;
};

struct DampingModel {
  std::variant<WhiteNoise, PowerLaw, Lorentzian> kind;

  // Rate at frequency `w`. No sign check here; see dissipation.hpp.
  double operator()(double w) const;
  bool is_frequency_independent() const;
  std::string kind_name() const;

  bool operator==(const DampingModel&) const = default;
};

}  // namespace bosonet
