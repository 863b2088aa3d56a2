#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "haarvol/simulator.hpp"

namespace haarvol {

// Seed used by `reproduce-figures` unless overridden; documented in README.
inline constexpr std::uint64_t kFigureSeed = 1904;

struct ExperimentConfig {
  std::string command;
  SimConfig sim;
  bool seed_explicit = false;  // reproduce-figures falls back to kFigureSeed otherwise
  std::filesystem::path output_dir = ".";
  std::string format = "csv";  // csv | json
  bool quick = false;
  std::vector<std::string> routes{"fast", "wavelet", "oracle"};

  // convergence
  int j_min = 4;
  int j_max = 9;

  // estimate
  std::vector<double> t0_list{0.5};
  int h_level_min = 3;
  int h_level_max = 10;
  double divergence_epsilon = 0.25;

  // validate
  std::optional<std::filesystem::path> constants_path;
};

// Parses the JSON experiment file. Unknown keys and malformed values raise
// ConfigError naming the field.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Writes the three figure CSVs (mBm driver with its Hurst ramp, and the two
// coupled log-price trajectories) plus sidecars into dir.
void write_figure_files(const std::filesystem::path& dir, std::uint64_t seed);

int run_simulate(const ExperimentConfig& config);
int run_convergence(const ExperimentConfig& config);
int run_estimate(const ExperimentConfig& config);
int run_reproduce_figures(const ExperimentConfig& config);
int run_validate(const ExperimentConfig& config);

// Dispatches on config.command and maps errors to exit codes:
// 0 success, 1 validation failure, 2 configuration error, 3 resource limit.
int run_command(const ExperimentConfig& config);

}  // namespace haarvol
