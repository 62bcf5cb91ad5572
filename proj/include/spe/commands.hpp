#pragma once
// The runnable surface: each command turns a resolved config into files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spe/config.hpp"

namespace spe {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // validate found a failing check
  kExitConfig = 2,
  kExitRuntime = 3,
};

inline constexpr const char* kWorkersEnv = "SPE_WORKERS";

/// SPE_WORKERS if set to a positive integer, else the hardware concurrency.
/// Throws ConfigError on a malformed value.
unsigned workers_from_env();

/// S_ideal, S_eff and S_mixed over the sweep grid. Returns the written paths.
std::vector<std::filesystem::path> cmd_theory(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Monte Carlo sweep; needs cfg.seed (ConfigError otherwise).
std::vector<std::filesystem::path> cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                                unsigned workers);

/// Autocorrelation over [0, range] for the configured and the unfiltered spectrum.
std::vector<std::filesystem::path> cmd_autocorr(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct CommandOptions {
  std::string command;  // theory | simulate | autocorr
  std::optional<std::filesystem::path> config;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> workers;
};

/// Loads the config, applies overrides, runs the command and maps failures to
/// exit codes: 2 for configuration problems, 3 for anything at run time.
int run_command(const CommandOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace spe
