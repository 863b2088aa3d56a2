#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haarvol/cli.hpp"
#include "haarvol/errors.hpp"
#include "haarvol/version.hpp"

namespace {

struct Flags {
  std::optional<std::string> config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool quick = false;
  std::optional<int> output_level;
  std::optional<std::string> phi;
  std::optional<std::string> driver;
  std::optional<double> hurst;
  std::optional<int> replicas;
  std::optional<std::string> format;
  std::optional<std::string> constants;
  std::optional<int> j_min, j_max;
};

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_file, "JSON experiment file");
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_flag("--quick", flags.quick, "reduced replica counts");
  cmd->add_option("--J", flags.output_level, "output dyadic level J");
  cmd->add_option("--phi", flags.phi, "volatility function preset");
  cmd->add_option("--driver", flags.driver, "driver kind: bm|fbm|mbm");
  cmd->add_option("--H", flags.hurst, "Hurst parameter (fbm)");
  cmd->add_option("--replicas", flags.replicas, "replica count");
  cmd->add_option("--format", flags.format, "output format: csv|json");
}

// Flags win over the config file.
haarvol::ExperimentConfig resolve(const std::string& command, const Flags& flags) {
  haarvol::ExperimentConfig config;
  if (flags.config_file)
    config = haarvol::load_experiment_config(*flags.config_file);
  config.command = command;
  if (flags.seed) {
    config.sim.master_seed = *flags.seed;
    config.seed_explicit = true;
  }
  if (flags.out_dir) config.output_dir = *flags.out_dir;
  if (flags.quick) config.quick = true;
  if (flags.output_level) config.sim.output_level = *flags.output_level;
  if (flags.phi) config.sim.phi_name = *flags.phi;
  if (flags.driver) {
    if (*flags.driver == "bm")
      config.sim.driver = haarvol::DriverKind::brownian_motion;
    else if (*flags.driver == "fbm")
      config.sim.driver = haarvol::DriverKind::fractional_bm;
    else if (*flags.driver == "mbm")
      config.sim.driver = haarvol::DriverKind::multifractional_bm;
    else
      throw haarvol::ConfigError("--driver must be bm|fbm|mbm");
  }
  if (flags.hurst) config.sim.hurst = *flags.hurst;
  if (flags.replicas) config.sim.replicas = *flags.replicas;
  if (flags.format) config.format = *flags.format;
  if (flags.constants) config.constants_path = *flags.constants;
  if (flags.j_min) config.j_min = *flags.j_min;
  if (flags.j_max) config.j_max = *flags.j_max;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"haarvol: stochastic volatility path simulation on the Haar "
               "multiresolution, with regularity validation"};
  app.set_version_flag("--version", haarvol::kLibraryVersion);
  app.require_subcommand(1);

  Flags flags;
  CLI::App* simulate = app.add_subcommand("simulate", "generate coupled trajectories");
  CLI::App* convergence =
      app.add_subcommand("convergence", "fit the error decay of the fast route");
  CLI::App* estimate = app.add_subcommand("estimate", "Hoelder norms and exponents");
  CLI::App* reproduce =
      app.add_subcommand("reproduce-figures", "emit the reference trajectory CSVs");
  CLI::App* validate = app.add_subcommand("validate", "run the acceptance checks");
  for (CLI::App* cmd : {simulate, convergence, estimate, reproduce, validate})
    add_common(cmd, flags);
  convergence->add_option("--j-min", flags.j_min, "smallest J in the fit");
  convergence->add_option("--j-max", flags.j_max, "largest J in the fit");
  validate->add_option("--constants", flags.constants, "JSON threshold overrides");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    return haarvol::run_command(resolve(command, flags));
  } catch (const haarvol::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
}
