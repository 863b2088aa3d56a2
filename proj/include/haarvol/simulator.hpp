#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haarvol/gp_driver.hpp"

namespace haarvol {

// Experiment configuration for one coupled (X, W) draw. The output grid has
// 2^J + 1 points; both processes are sampled on the fine grid at level 2J.
struct SimConfig {
  int output_level = 8;  // J
  DriverKind driver = DriverKind::fractional_bm;
  double hurst = 0.8;            // fractional_bm
  HurstFunction hurst_fn;        // multifractional_bm
  std::string phi_name;          // required; see preset_phi
  std::uint64_t master_seed = 1;
  int replicas = 1;
  std::vector<double> gamma_list{0.3};
  DriverOptions driver_options;

  int fine_level() const { return 2 * output_level; }
  void validate() const;
  std::string canonical_string() const;
  std::uint64_t hash() const;
};

enum class Route { fast, wavelet_partial, oracle };

const char* route_name(Route route);

struct SimulatedPath {
  DyadicGrid grid{0};
  std::vector<double> values;
  Route route = Route::fast;
  int partial_level = -1;  // wavelet_partial only
  std::uint64_t config_hash = 0;
};

// The iterative scheme: simulate X and W at level 2J, derive the normalized
// Brownian increments delta_{J,l}, approximate the cell integrals of Phi(X)
// by left-point Riemann sums, and accumulate
//   Zhat(m/2^J) = Zhat((m-1)/2^J) + bhat_{J,m-1} * delta_{J,m-1}.
// O(2^{2J}) arithmetic total; output on the level-J grid.
SimulatedPath simulate_fast(const SimConfig& config);

// Partial sum of the Haar expansion of the kernel,
//   Z_P(t) = b00(t) delta00 + sum_{j<=P} sum_k a_{j,k}(t) lambda_{j,k},
// evaluated on the level-J output grid from the same (X, W) draw as the other
// routes under the same seed. Requires P + 1 <= 2J.
SimulatedPath simulate_wavelet_partial(const SimConfig& config, int partial_level);

// Left-point Ito discretization of int Phi(X) dW on the full fine grid
// (level 2J); the reference route the others are compared against.
SimulatedPath simulate_oracle(const SimConfig& config);

struct PathTriple {
  SimulatedPath fast;
  SimulatedPath wavelet;
  SimulatedPath oracle;
};

// The (X, W) sample a configuration draws: X from substream 0, W from
// substream 1 of the master seed, both at the fine level 2J. Every route of
// the same config consumes exactly these values.
struct CoupledDraw {
  GaussianPath x;
  GaussianPath w;
};

CoupledDraw coupled_draw(const SimConfig& config);

// Route evaluation on an existing draw (must come from a config with the same
// fine level; seeds and drivers may differ only in phi).
SimulatedPath simulate_fast(const SimConfig& config, const CoupledDraw& draw);
SimulatedPath simulate_oracle(const SimConfig& config, const CoupledDraw& draw);
SimulatedPath simulate_wavelet_partial(const SimConfig& config, const CoupledDraw& draw,
                                       int partial_level);

// One coupled draw evaluated by all requested routes. The wavelet route uses
// partial level J-1 (so it spans the same multiresolution space as the fast
// route) unless overridden.
PathTriple simulate_coupled(const SimConfig& config, bool with_wavelet = true,
                            int wavelet_partial_level = -1);

// Replica r runs with master_seed XOR r; deterministic given the config.
std::vector<PathTriple> run_ensemble(const SimConfig& config);

// Restriction of a path to a coarser dyadic level.
std::vector<double> restrict_values(const SimulatedPath& path, int coarse_level);

// Piecewise-linear interpolation of a path onto a finer dyadic level.
std::vector<double> interpolate_values(const SimulatedPath& path, int fine_level);

}  // namespace haarvol
