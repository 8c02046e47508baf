#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "xysim/config.hpp"

namespace xysim {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSimulation = 3, kExitOracle = 4 };

struct CliOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int workers = 0;  // 0 = all available
  std::string oracle_check;
  std::size_t oracle_realizations = 200;
};

/// Preset and/or file (file keys override the preset), then --seed.
RunConfig load_config(const CliOptions& options);

/// Default grids when the config leaves them out.
std::vector<double> default_dtc_taus(double omega_y);  // us, multiples of 2 pi / omega_y
std::vector<double> default_dtc_epsilons();             // rad, 0 to 0.09 pi

// Each writes into options.out_dir and returns the list of files written.
std::vector<std::string> cmd_simulate(const RunConfig& config, const CliOptions& options);
std::vector<std::string> cmd_sweep(const RunConfig& config, const CliOptions& options);
std::vector<std::string> cmd_dtc_phase(const RunConfig& config, const CliOptions& options);
std::vector<std::string> cmd_calibrate(const RunConfig& config, const CliOptions& options);
/// Prints the report; returns kExitOk or kExitOracle.
int cmd_oracle(const CliOptions& options, std::ostream& out);

/// Dispatches a subcommand and maps failures to exit codes, reporting on `err`.
int run_command(const std::string& command, const CliOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace xysim
