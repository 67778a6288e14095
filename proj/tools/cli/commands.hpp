#pragma once

#include <iosfwd>

#include "cli/config.hpp"

namespace polariton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitValidation = 4;

// Each command writes its files under config.run.output_dir and returns an
// exit code; exceptions are mapped to exit codes by the caller.
int cmd_phase_diagram(const RunConfig& config, std::ostream& log);
int cmd_critical(const RunConfig& config, std::ostream& log);
int cmd_disorder(const RunConfig& config, std::ostream& log);
int cmd_kerr(const RunConfig& config, std::ostream& log);

// Oracle suite; prints one line per check to `out`. inject_failure perturbs
// one reference value so the failure path can be exercised.
int cmd_validate(const RunConfig& config, std::ostream& out, bool inject_failure);

}  // namespace polariton::cli
