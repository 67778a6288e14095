#pragma once

// Run configuration for the polariton tool. Sources, later ones winning:
// built-in defaults, the JSON config file, environment variables
// (POLARITON_SEED, POLARITON_THREADS), then command-line flags and --set.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "polariton/disorder.hpp"
#include "polariton/meanfield.hpp"
#include "polariton/model.hpp"
#include "polariton/observables.hpp"

namespace polariton::cli {

struct SystemSection {
  int n_impurities = 8;
  double detuning_g = 0.0;
  int z = 4;
  double wavelength_nm = 817.0;
  double g_ghz = 33.3;
  std::string g_convention = "ordinary";  // or "angular"
  double refractive_index = 3.6;
};

struct PhaseDiagramSection {
  double t_min = 0.0;
  double t_max = 0.02;
  int t_points = 64;
  double mu_min = -3.0;
  double mu_max = -2.2;
  int mu_points = 64;
  bool heatmap = true;
};

struct CriticalSection {
  std::vector<int> n_values{1, 3, 8, 20, 50};
  std::vector<double> detunings_g{0.0};
  int filling = 1;
};

struct DisorderSection {
  double n_mean = 3.0;
  double detuning_g = 12.0;
  double sigma_omega_max = 4.0;  // units of g
  double g_sigma_max = 0.28;     // units of g
  double n_sigma_max = 1.0;      // impurity count
  int points = 16;
  std::string n_dist = "auto";
  std::size_t samples = 10000;
  std::string statistic = "std";
  double quantile_q = 0.005;
  std::string site_model = "exact";
  int filling = 1;
  double safety_factor = 10.0;
  std::string rate = "per_site";
  int refine_steps = 16;
};

struct KerrFixture {
  double sigma_m = 200e-9;
  int points = 65;
  double half_width_sigma = 6.0;
  double k_c = 12.25;
  double chi3 = 1e-18;
};

struct KerrSection {
  std::string k_c_file;
  std::string chi3_file;
  std::string phi_file;
  std::array<double, 3> displacement_m{300e-9, 0.0, 0.0};
  double chi3_scale = 1.0;
  double photon_energy = 0.0;  // <= 0 keeps self-energy units
  bool write_fixture = false;
  KerrFixture fixture;
};

struct RunSection {
  std::string output_dir = "polariton-out";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool physical_units = false;
};

struct RunConfig {
  SystemSection system;
  LossParams loss;
  SolverOptions solver;
  PhaseDiagramSection phase_diagram;
  CriticalSection critical;
  DisorderSection disorder;
  KerrSection kerr;
  RunSection run;

  // Throws ConfigError on the first invalid value.
  void validate() const;

  SystemParams system_params_g() const;       // units of g
  double g_physical() const;                  // rad/s
  SystemParams system_params_physical() const;
};

// Applies a JSON document on top of `config`. Unknown sections or keys and
// type mismatches throw ConfigError naming the offending key.
void apply_json(RunConfig& config, const nlohmann::json& doc);

RunConfig load_config_file(const std::string& path, RunConfig base = {});

// `assignment` is "section.key=value"; value is parsed as JSON, falling back
// to a plain string.
void apply_override(RunConfig& config, const std::string& assignment);

// Reads POLARITON_SEED and POLARITON_THREADS from `env` (name -> value).
void apply_environment(RunConfig& config, const std::map<std::string, std::string>& env);
std::map<std::string, std::string> process_environment();

// Full configuration as JSON. The snapshot form leaves out run.output_dir and
// run.threads, which do not affect results.
nlohmann::json to_json(const RunConfig& config, bool snapshot = false);

NumberDistribution parse_number_distribution(const std::string& s);
FluctuationStatistic parse_statistic(const std::string& s);
SiteModel parse_site_model(const std::string& s);
TunnelingRate parse_rate(const std::string& s);

}  // namespace polariton::cli
