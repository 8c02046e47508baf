#include <iostream>

#include <CLI11.hpp>

#include "xysim/commands.hpp"
#include "xysim/config.hpp"

int main(int argc, char** argv) {
  using namespace xysim;
  CLI::App app{"Disordered dipolar XY spin-ensemble simulator"};
  app.set_version_flag("--version", XYSIM_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  CliOptions opt;
  std::uint64_t seed = 0;
  app.add_option("--config", opt.config_path, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--preset", opt.preset, "built-in profile")
      ->check(CLI::IsMember(preset_names()));
  app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "override the master seed");
  app.add_option("--workers", opt.workers, "worker threads (0 = all available)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  app.add_subcommand("simulate", "ensemble trace: CSV plus JSON record");
  app.add_subcommand("sweep", "one row per value of analysis.sweep_param");
  app.add_subcommand("dtc-phase", "DTC phase diagram and boundary");
  app.add_subcommand("calibrate", "concentration matching analysis.target_slope");
  auto* oracle = app.add_subcommand("oracle", "oracle-equivalence suites");
  oracle->add_option("check", opt.oracle_check, "two-spin, three-spin, aht, convergence or all")
      ->check(CLI::IsMember({"two-spin", "three-spin", "aht", "convergence", "all"}));
  oracle->add_option("--realizations", opt.oracle_realizations, "convergence-suite ensemble size")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (*seed_opt) opt.seed = seed;
  const std::string command = app.get_subcommands().front()->get_name();
  return run_command(command, opt, std::cout, std::cerr);
}
