#ifndef REPDAY_TOOLS_CLI_CONFIG_HPP
#define REPDAY_TOOLS_CLI_CONFIG_HPP

#include <string>
#include <vector>

#include "repday/pipeline.hpp"
#include "repday/synthgen.hpp"

namespace repday::cli {

/// Everything the config file can say. Flags override these values; each
/// field's default is the struct default visible here or in the library
/// headers.
struct CliConfig {
  pipeline::RunConfig run;  // sections "run" and "technology"
  SynthConfig synth;        // section "synth"
  std::vector<double> fractions = {1.2, 1.0, 0.8, 0.5, 0.2, 0.0};  // "sweep"
  std::vector<int> cluster_counts = {3, 5, 7, 9};                  // "compare"
};

/// Parses a JSON config file (// comments allowed). Unknown keys are rejected
/// by name; type mismatches and unreadable files raise pipeline::ConfigError.
/// An empty path returns the defaults.
CliConfig load_cli_config(const std::string& path);

}  // namespace repday::cli

#endif  // REPDAY_TOOLS_CLI_CONFIG_HPP
