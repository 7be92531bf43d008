#pragma once

#include <string>
#include <vector>

#include "rlw/run_config.hpp"

namespace rlw {

/// Names of the experiment commands, in help order.
const std::vector<std::string>& all_experiment_commands();

/// Executes one named experiment with the given flat configuration.
/// Individual cells of a convergence table mark their own solver failures
/// and continue; single-run experiments and the 2D reference run propagate
/// failures. Throws ConfigError for bad configuration. The RLW_OUT
/// environment variable overrides the output directory.
void run_experiment(const std::string& command, const KeyValues& kv);

}  // namespace rlw
