#pragma once

// Derived quantities of the clean lattice: polariton interaction energy,
// photon/exciton fractions, loss rates and the cavity-Q requirement.

#include "polariton/meanfield.hpp"
#include "polariton/model.hpp"

namespace polariton {

namespace constants {
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 2.99792458e8;       // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
}  // namespace constants

// Angular frequency of light with the given vacuum wavelength.
double angular_frequency_from_wavelength(double wavelength_nm);

// Physical coupling g in rad/s from a quoted frequency in GHz. With the
// ordinary-frequency reading, g = 2 pi f; the angular reading takes the
// number as rad/s directly.
enum class FrequencyConvention { kOrdinary, kAngular };
double coupling_from_ghz(double ghz, FrequencyConvention convention);

struct LossParams {
  double tau_e = 1e-9;       // exciton lifetime, s
  double purcell_f = 0.2;    // Purcell factor F
  double q_cavity = 1e6;     // cavity Q
  double eta = 1.0;          // equilibrium safety factor

  void validate() const;  // throws std::invalid_argument
};

struct PolaritonComposition {
  double c_ph_sq;
  double c_ex_sq;
};

// U = E(2) - 2 E(1) of the manifold ladder.
double interaction_energy(const SystemParams& params);

// Width of Mott lobe n at t = 0: E(n+1) - 2 E(n) + E(n-1). Equals
// interaction_energy for n = 1.
double lobe_width(const SystemParams& params, int n);

// Lower polariton of the one-excitation manifold.
PolaritonComposition polariton_fractions(const SystemParams& params);

// Gamma = |c_ph|^2 w_ph / Q + |c_ex|^2 F / tau_e, in 1/s. params must be in
// physical units (rad/s).
double polariton_loss_rate(const SystemParams& params, const LossParams& loss);

struct RequiredQ {
  bool reachable;
  double value;  // +inf when unreachable
};

// Q_r = |c_ph|^2 w_ph / (|c_ph|^2 rate / eta - |c_ex|^2 F / tau_e), with
// `tunneling_rate` in rad/s. Unreachable when the denominator is <= 0.
RequiredQ required_q(const SystemParams& params, const LossParams& loss,
                     double tunneling_rate);

// U / (|c_ph|^2 t_c) for the lowest lobe, computed in units of g.
double bhm_ratio(const SystemParams& params, const SolverOptions& options = {});
double bhm_ratio(const SystemParams& params, double t_c);

// Mode volume (lambda / n)^3 in nm^3 and impurity density in cm^-3.
double mode_volume(double wavelength_nm, double refractive_index);
double doping_density(double big_n, double wavelength_nm, double refractive_index);

}  // namespace polariton
