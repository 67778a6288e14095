#include "cli/app.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "polariton/error.hpp"
#include "polariton/version.hpp"

namespace polariton::cli {

namespace {

struct Flags {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::string> output_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  bool physical_units = false;
  bool quiet = false;
  bool inject_failure = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("-c,--config", f.config_file, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--set", f.sets, "Override a config value: section.key=value (repeatable)");
  sub->add_option("-o,--output-dir", f.output_dir, "Directory for result files");
  sub->add_option("-j,--threads", f.threads, "Worker threads (0 = all cores)");
  sub->add_option("--seed", f.seed, "Random seed");
  sub->add_flag("--physical-units", f.physical_units, "Report energies in rad/s instead of g");
  sub->add_flag("-q,--quiet", f.quiet, "No progress messages");
}

RunConfig resolve(const Flags& f, const std::map<std::string, std::string>& env) {
  RunConfig config;
  if (!f.config_file.empty()) config = load_config_file(f.config_file);
  apply_environment(config, env);
  for (const auto& s : f.sets) apply_override(config, s);
  if (f.output_dir) config.run.output_dir = *f.output_dir;
  if (f.threads) config.run.threads = *f.threads;
  if (f.seed) config.run.seed = *f.seed;
  if (f.physical_units) config.run.physical_units = true;
  config.validate();
  return config;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& env) {
  CLI::App app{"Mean-field phase diagrams of coupled impurity-cavity polariton lattices"};
  app.set_version_flag("--version", std::string("polariton ") + version());
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"phase-diagram", "Order parameter over a (t, mu) grid"},
      {"critical", "Critical tunneling, U, ratio and required Q over N and detuning"},
      {"disorder", "Disorder grid, Bose-glass/Mott iso-surface and axis intercepts"},
      {"kerr", "Dispersive-limit t and U from mode-overlap quadrature"},
      {"validate", "Run the built-in oracle checks"},
      {"show-config", "Print the effective configuration as JSON"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    if (std::string(name) == "validate")
      sub->add_flag("--inject-failure", flags.inject_failure,
                    "Perturb one reference value to exercise the failure path");
  }

  std::ostringstream cli_out, cli_err;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::ostringstream sink;
  try {
    const RunConfig config = resolve(flags, env);
    std::ostream& log = flags.quiet ? static_cast<std::ostream&>(sink) : err;
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "phase-diagram") return cmd_phase_diagram(config, log);
    if (name == "critical") return cmd_critical(config, log);
    if (name == "disorder") return cmd_disorder(config, log);
    if (name == "kerr") return cmd_kerr(config, log);
    if (name == "validate") return cmd_validate(config, out, flags.inject_failure);
    out << to_json(config).dump(2) << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: invalid input: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitNumerical;
  }
}

}  // namespace polariton::cli
