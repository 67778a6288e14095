#include "polariton/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace polariton {

double angular_frequency_from_wavelength(double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) throw std::invalid_argument("wavelength must be positive");
  return 2.0 * constants::kPi * constants::kSpeedOfLight / (wavelength_nm * 1e-9);
}

double coupling_from_ghz(double ghz, FrequencyConvention convention) {
  if (!(ghz > 0.0)) throw std::invalid_argument("coupling must be positive");
  const double hz = ghz * 1e9;
  return convention == FrequencyConvention::kOrdinary ? 2.0 * constants::kPi * hz : hz;
}

void LossParams::validate() const {
  if (!(tau_e > 0.0)) throw std::invalid_argument("tau_e must be positive");
  if (!(purcell_f > 0.0)) throw std::invalid_argument("Purcell factor must be positive");
  if (!(q_cavity > 0.0)) throw std::invalid_argument("cavity Q must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("safety factor eta must be positive");
}

double interaction_energy(const SystemParams& params) {
  return manifold_energy(params, 2) - 2.0 * manifold_energy(params, 1);
}

double lobe_width(const SystemParams& params, int n) {
  const auto lobe = mott_lobe_mu_range(params, n);
  return lobe.upper - lobe.lower;
}

PolaritonComposition polariton_fractions(const SystemParams& params) {
  const double delta = params.detuning();
  const double four_n_g2 = 4.0 * params.big_n() * params.g() * params.g();
  const double c_ph = 0.5 * (1.0 - delta / std::sqrt(delta * delta + four_n_g2));
  return {c_ph, 1.0 - c_ph};
}

double polariton_loss_rate(const SystemParams& params, const LossParams& loss) {
  loss.validate();
  const auto mix = polariton_fractions(params);
  return mix.c_ph_sq * params.omega_ph() / loss.q_cavity +
         mix.c_ex_sq * loss.purcell_f / loss.tau_e;
}

RequiredQ required_q(const SystemParams& params, const LossParams& loss,
                     double tunneling_rate) {
  loss.validate();
  if (!(tunneling_rate > 0.0))
    throw std::invalid_argument("tunneling rate must be positive");
  const auto mix = polariton_fractions(params);
  const double budget = mix.c_ph_sq * tunneling_rate / loss.eta -
                        mix.c_ex_sq * loss.purcell_f / loss.tau_e;
  if (!(budget > 0.0)) return {false, std::numeric_limits<double>::infinity()};
  return {true, mix.c_ph_sq * params.omega_ph() / budget};
}

double bhm_ratio(const SystemParams& params, double t_c) {
  const auto scaled = params.in_units_of_g();
  return interaction_energy(scaled) / (polariton_fractions(scaled).c_ph_sq * t_c);
}

double bhm_ratio(const SystemParams& params, const SolverOptions& options) {
  const auto scaled = params.in_units_of_g();
  return bhm_ratio(scaled, critical_tunneling(scaled, 1, options).t_c);
}

double mode_volume(double wavelength_nm, double refractive_index) {
  if (!(wavelength_nm > 0.0) || !(refractive_index > 0.0))
    throw std::invalid_argument("wavelength and refractive index must be positive");
  const double side = wavelength_nm / refractive_index;
  return side * side * side;
}

double doping_density(double big_n, double wavelength_nm, double refractive_index) {
  if (big_n < 0.0) throw std::invalid_argument("impurity count must be >= 0");
  constexpr double kCubicCmPerCubicNm = 1e-21;
  return big_n / (mode_volume(wavelength_nm, refractive_index) * kCubicCmPerCubicNm);
}

}  // namespace polariton
