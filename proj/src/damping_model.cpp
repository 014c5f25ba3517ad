#include "bosonet/damping_model.hpp"

#include <cmath>

namespace bosonet {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

double DampingModel::operator()(double w) const {
  return std::visit(
      overloaded{
          [](const WhiteNoise& m) { return m.rate; },
          [w](const PowerLaw& m) {
            if (w <= 0.0) return 0.0;
            return m.gamma0 * std::pow(w / m.omega_ref, m.exponent);
          },
          [w](const Lorentzian& m) {
            const double hw = 0.5 * m.width;
            const double dw = w - m.omega_c;
            return m.gamma0 * hw * hw / (dw * dw + hw * hw);
          },
      },
      kind);
}

bool DampingModel::is_frequency_independent() const {
  // A zero-exponent power law still vanishes for w <= 0, so only white
  // noise is truly flat.
  return std::holds_alternative<WhiteNoise>(kind);
}

std::string DampingModel::kind_name() const {
  return std::visit(overloaded{
                        [](const WhiteNoise&) { return std::string("white_noise"); },
                        [](const PowerLaw&) { return std::string("power_law"); },
                        [](const Lorentzian&) { return std::string("lorentzian"); },
                    },
                    kind);
}

}  // namespace bosonet
