#pragma once

#include <string>
#include <vector>

#include "cflow/pressure_law.hpp"

namespace cflow {

/// CSV text with rows (rho, p, eps, eps_p) for each eps over the density grid,
/// skipping entries at or beyond rho_star * (1 - 1e-6). Starts with the header
/// row and the config-hash comment row like every other emitted file.
std::string emit_pressure_profile(const PressureLaw& law, const std::vector<double>& eps_list,
                                  const std::vector<double>& rho_grid,
                                  const std::string& config_hash = "unstamped");

/// Entry point behind the cflow binary: parses --config/--out/--seed,
/// dispatches on the config's "command" field and writes the artifacts.
/// Returns 0 on success, 1 on solver errors (machine-readable JSON on stderr)
/// or failed verification, 2 on CLI/config/parse problems.
int run_cli(int argc, char** argv);

}  // namespace cflow
