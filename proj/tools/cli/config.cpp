#include "cli/config.hpp"

#include <fmt/format.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <type_traits>

#include "polariton/error.hpp"


namespace polariton::cli {

using nlohmann::json;

namespace {

template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};

std::string type_name(const json& j) { return j.type_name(); }

template <class T>
T read_value(const json& j, const std::string& key) {
  auto fail = [&](const char* want) {
    return ConfigError(fmt::format("{}: expected {}, got {} ({})", key, want, type_name(j), j.dump()));
  };
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw fail("a boolean");
    return j.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) throw fail("a string");
    return j.get<std::string>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!j.is_number()) throw fail("a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw fail("a finite number");
    return v;
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw fail("an integer");
    if (j.is_number_unsigned()) {
      const auto v = j.get<std::uint64_t>();
      if (v > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) throw fail("an integer in range");
      return static_cast<T>(v);
    }
    const auto v = j.get<std::int64_t>();
    if constexpr (std::is_unsigned_v<T>) {
      if (v < 0) throw fail("a non-negative integer");
    } else {
      if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max())
        throw fail("an integer in range");
    }
    return static_cast<T>(v);
  } else if constexpr (is_vector<T>::value) {
    if (!j.is_array()) throw fail("an array");
    T out;
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(read_value<typename T::value_type>(j[i], fmt::format("{}[{}]", key, i)));
    return out;
  } else {
    // std::array<double, 3>
    if (!j.is_array() || j.size() != std::tuple_size_v<T>) throw fail("an array of 3 numbers");
    T out{};
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = read_value<double>(j[i], fmt::format("{}[{}]", key, i));
    return out;
  }
}

// Calls v(section, key, field) for every configurable field.
template <class V>
void visit(RunConfig& c, V&& v) {
  auto& s = c.system;
  v("system", "n_impurities", s.n_impurities);
  v("system", "detuning_g", s.detuning_g);
  v("system", "z", s.z);
  v("system", "wavelength_nm", s.wavelength_nm);
  v("system", "g_ghz", s.g_ghz);
  v("system", "g_convention", s.g_convention);
  v("system", "refractive_index", s.refractive_index);

  auto& l = c.loss;
  v("loss", "tau_e", l.tau_e);
  v("loss", "purcell_f", l.purcell_f);
  v("loss", "q_cavity", l.q_cavity);
  v("loss", "eta", l.eta);

  auto& o = c.solver;
  v("solver", "n_max_initial", o.n_max_initial);
  v("solver", "n_max_limit", o.n_max_limit);
  v("solver", "cutoff_rel_tol", o.cutoff_rel_tol);
  v("solver", "coarse_points", o.coarse_points);
  v("solver", "psi_tol", o.psi_tol);
  v("solver", "psi_zero_tol", o.psi_zero_tol);
  v("solver", "psi_max_limit", o.psi_max_limit);
  v("solver", "boundary_rel_tol", o.boundary_rel_tol);
  v("solver", "mu_tol", o.mu_tol);

  auto& p = c.phase_diagram;
  v("phase_diagram", "t_min", p.t_min);
  v("phase_diagram", "t_max", p.t_max);
  v("phase_diagram", "t_points", p.t_points);
  v("phase_diagram", "mu_min", p.mu_min);
  v("phase_diagram", "mu_max", p.mu_max);
  v("phase_diagram", "mu_points", p.mu_points);
  v("phase_diagram", "heatmap", p.heatmap);

  auto& cr = c.critical;
  v("critical", "n_values", cr.n_values);
  v("critical", "detunings_g", cr.detunings_g);
  v("critical", "filling", cr.filling);

  auto& d = c.disorder;
  v("disorder", "n_mean", d.n_mean);
  v("disorder", "detuning_g", d.detuning_g);
  v("disorder", "sigma_omega_max", d.sigma_omega_max);
  v("disorder", "g_sigma_max", d.g_sigma_max);
  v("disorder", "n_sigma_max", d.n_sigma_max);
  v("disorder", "points", d.points);
  v("disorder", "n_dist", d.n_dist);
  v("disorder", "samples", d.samples);
  v("disorder", "statistic", d.statistic);
  v("disorder", "quantile_q", d.quantile_q);
  v("disorder", "site_model", d.site_model);
  v("disorder", "filling", d.filling);
  v("disorder", "safety_factor", d.safety_factor);
  v("disorder", "rate", d.rate);
  v("disorder", "refine_steps", d.refine_steps);

  auto& k = c.kerr;
  v("kerr", "k_c_file", k.k_c_file);
  v("kerr", "chi3_file", k.chi3_file);
  v("kerr", "phi_file", k.phi_file);
  v("kerr", "displacement_m", k.displacement_m);
  v("kerr", "chi3_scale", k.chi3_scale);
  v("kerr", "photon_energy", k.photon_energy);
  v("kerr", "write_fixture", k.write_fixture);
  v("kerr", "fixture_sigma_m", k.fixture.sigma_m);
  v("kerr", "fixture_points", k.fixture.points);
  v("kerr", "fixture_half_width_sigma", k.fixture.half_width_sigma);
  v("kerr", "fixture_k_c", k.fixture.k_c);
  v("kerr", "fixture_chi3", k.fixture.chi3);

  auto& r = c.run;
  v("run", "output_dir", r.output_dir);
  v("run", "seed", r.seed);
  v("run", "threads", r.threads);
  v("run", "physical_units", r.physical_units);
}

void assign(RunConfig& config, const std::string& section, const std::string& key,
            const json& value) {
  bool section_known = false;
  bool done = false;
  visit(config, [&](const char* s, const char* k, auto& field) {
    if (section != s) return;
    section_known = true;
    if (key != k) return;
    field = read_value<std::decay_t<decltype(field)>>(value, section + "." + key);
    done = true;
  });
  if (!section_known) throw ConfigError(fmt::format("unknown config section '{}'", section));
  if (!done) throw ConfigError(fmt::format("unknown config key '{}.{}'", section, key));
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

NumberDistribution parse_number_distribution(const std::string& s) {
  if (s == "auto") return NumberDistribution::kAuto;
  if (s == "poisson") return NumberDistribution::kPoisson;
  if (s == "sub_poisson") return NumberDistribution::kSubPoisson;
  throw ConfigError(fmt::format("disorder.n_dist: '{}' is not one of auto, poisson, sub_poisson", s));
}

FluctuationStatistic parse_statistic(const std::string& s) {
  if (s == "std") return FluctuationStatistic::kStdDev;
  if (s == "quantile") return FluctuationStatistic::kQuantile;
  throw ConfigError(fmt::format("disorder.statistic: '{}' is not one of std, quantile", s));
}

SiteModel parse_site_model(const std::string& s) {
  if (s == "exact") return SiteModel::kExact;
  if (s == "collective") return SiteModel::kCollective;
  throw ConfigError(fmt::format("disorder.site_model: '{}' is not one of exact, collective", s));
}

TunnelingRate parse_rate(const std::string& s) {
  if (s == "per_site") return TunnelingRate::kPerSite;
  if (s == "per_bond") return TunnelingRate::kPerBond;
  throw ConfigError(fmt::format("disorder.rate: '{}' is not one of per_site, per_bond", s));
}

void RunConfig::validate() const {
  const auto& s = system;
  require(s.n_impurities >= 1, "system.n_impurities must be >= 1");
  require(s.z >= 1, "system.z must be >= 1");
  require(s.wavelength_nm > 0.0, "system.wavelength_nm must be positive");
  require(s.g_ghz > 0.0, "system.g_ghz must be positive");
  require(s.g_convention == "ordinary" || s.g_convention == "angular",
          fmt::format("system.g_convention: '{}' is not one of ordinary, angular", s.g_convention));
  require(s.refractive_index > 0.0, "system.refractive_index must be positive");
  try {
    loss.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("loss: {}", e.what()));
  }
  require(solver.n_max_limit >= 2, "solver.n_max_limit must be >= 2");
  require(solver.cutoff_rel_tol > 0.0, "solver.cutoff_rel_tol must be positive");
  require(solver.coarse_points >= 3, "solver.coarse_points must be >= 3");
  require(solver.psi_tol > 0.0, "solver.psi_tol must be positive");
  require(solver.psi_zero_tol > solver.psi_tol, "solver.psi_zero_tol must exceed solver.psi_tol");
  require(solver.psi_max_limit > 0.0, "solver.psi_max_limit must be positive");
  require(solver.boundary_rel_tol > 0.0 && solver.boundary_rel_tol < 1.0,
          "solver.boundary_rel_tol must lie in (0, 1)");
  require(solver.mu_tol > 0.0, "solver.mu_tol must be positive");

  const auto& p = phase_diagram;
  require(p.t_min >= 0.0, "phase_diagram.t_min must be >= 0");
  require(p.t_points >= 1 && p.mu_points >= 1, "phase_diagram point counts must be >= 1");
  require(p.t_points == 1 ? p.t_max >= p.t_min : p.t_max > p.t_min,
          "phase_diagram.t_max must exceed t_min");
  require(p.mu_points == 1 ? p.mu_max >= p.mu_min : p.mu_max > p.mu_min,
          "phase_diagram.mu_max must exceed mu_min");

  require(!critical.n_values.empty(), "critical.n_values is empty");
  for (int n : critical.n_values) require(n >= 1, "critical.n_values entries must be >= 1");
  require(!critical.detunings_g.empty(), "critical.detunings_g is empty");
  require(critical.filling >= 1, "critical.filling must be >= 1");

  const auto& d = disorder;
  require(d.n_mean >= 0.5, "disorder.n_mean must be >= 0.5");
  require(d.sigma_omega_max > 0.0 && d.g_sigma_max > 0.0 && d.n_sigma_max > 0.0,
          "disorder axis maxima must be positive");
  require(d.g_sigma_max <= 1.0 / uniform_width_from_sigma(1.0),
          fmt::format("disorder.g_sigma_max must be <= {:.6g} (g_k stays >= 0)",
                      1.0 / uniform_width_from_sigma(1.0)));
  require(d.points >= 2, "disorder.points must be >= 2");
  parse_number_distribution(d.n_dist);
  parse_statistic(d.statistic);
  parse_site_model(d.site_model);
  parse_rate(d.rate);
  require(d.samples >= 1, "disorder.samples must be >= 1");
  require(d.quantile_q > 0.0 && d.quantile_q < 0.5, "disorder.quantile_q must lie in (0, 0.5)");
  require(d.filling >= 1, "disorder.filling must be >= 1");
  require(d.safety_factor > 0.0, "disorder.safety_factor must be positive");
  require(d.refine_steps >= 1, "disorder.refine_steps must be >= 1");

  const auto& k = kerr;
  const bool any_file = !k.k_c_file.empty() || !k.chi3_file.empty() || !k.phi_file.empty();
  const bool all_files = !k.k_c_file.empty() && !k.chi3_file.empty() && !k.phi_file.empty();
  require(!any_file || all_files, "kerr: give all of k_c_file, chi3_file and phi_file, or none");
  require(k.fixture.sigma_m > 0.0, "kerr.fixture_sigma_m must be positive");
  require(k.fixture.points >= 3, "kerr.fixture_points must be >= 3");
  require(k.fixture.half_width_sigma > 0.0, "kerr.fixture_half_width_sigma must be positive");
  require(k.fixture.k_c > 0.0, "kerr.fixture_k_c must be positive");

  require(!run.output_dir.empty(), "run.output_dir is empty");
}

SystemParams RunConfig::system_params_g() const {
  const double w_ex = angular_frequency_from_wavelength(system.wavelength_nm) / g_physical();
  return SystemParams::from_detuning(w_ex, system.detuning_g, 1.0, system.n_impurities, system.z);
}

double RunConfig::g_physical() const {
  return coupling_from_ghz(system.g_ghz, system.g_convention == "angular"
                                             ? FrequencyConvention::kAngular
                                             : FrequencyConvention::kOrdinary);
}

SystemParams RunConfig::system_params_physical() const {
  const double g = g_physical();
  return SystemParams::from_detuning(angular_frequency_from_wavelength(system.wavelength_nm),
                                     system.detuning_g * g, g, system.n_impurities, system.z);
}

void apply_json(RunConfig& config, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object())
      throw ConfigError(fmt::format("config section '{}' must be an object", section));
    bool known = false;
    visit(config, [&](const char* s, const char*, auto&) { known = known || section == s; });
    if (!known) throw ConfigError(fmt::format("unknown config section '{}'", section));
    for (const auto& [key, value] : body.items()) assign(config, section, key, value);
  }
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
  apply_json(base, doc);
  return base;
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError(fmt::format("--set expects section.key=value, got '{}'", assignment));
  const std::string section = assignment.substr(0, dot);
  const std::string key = assignment.substr(dot + 1, eq - dot - 1);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  assign(config, section, key, value);
}

namespace {

std::uint64_t parse_unsigned(const std::string& name, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError(fmt::format("{}='{}' is not a non-negative integer", name, text));
  errno = 0;
  const auto v = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError(fmt::format("{}='{}' is out of range", name, text));
  return v;
}

}  // namespace

void apply_environment(RunConfig& config, const std::map<std::string, std::string>& env) {
  if (auto it = env.find("POLARITON_SEED"); it != env.end())
    config.run.seed = parse_unsigned(it->first, it->second);
  if (auto it = env.find("POLARITON_THREADS"); it != env.end()) {
    const auto v = parse_unsigned(it->first, it->second);
    if (v > 4096) throw ConfigError("POLARITON_THREADS is larger than 4096");
    config.run.threads = static_cast<unsigned>(v);
  }
}

std::map<std::string, std::string> process_environment() {
  std::map<std::string, std::string> out;
  for (const char* name : {"POLARITON_SEED", "POLARITON_THREADS"})
    if (const char* v = std::getenv(name)) out[name] = v;
  return out;
}

json to_json(const RunConfig& config, bool snapshot) {
  RunConfig copy = config;
  json out = json::object();
  visit(copy, [&](const char* s, const char* k, auto& field) {
    if (snapshot && std::string(s) == "run" &&
        (std::string(k) == "output_dir" || std::string(k) == "threads"))
      return;
    out[s][k] = field;
  });
  return out;
}

}  // namespace polariton::cli
