#include "haarvol/simulator.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "haarvol/errors.hpp"
#include "haarvol/haar_basis.hpp"
#include "haarvol/vol_kernel.hpp"

namespace haarvol {

namespace {

constexpr int kMaxFineLevel = 26;

std::string format_double(double v) {
  std::array<char, 40> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

}  // namespace

CoupledDraw coupled_draw(const SimConfig& config) {
  config.validate();
  RngStreams streams = make_streams(config.master_seed);
  const int fine = config.fine_level();
  CoupledDraw draw;
  switch (config.driver) {
    case DriverKind::brownian_motion:
      draw.x = generate_brownian(fine, streams.stream_x);
      break;
    case DriverKind::fractional_bm:
      draw.x = generate_fbm(config.hurst, fine, streams.stream_x, config.driver_options);
      break;
    case DriverKind::multifractional_bm:
      draw.x = generate_mbm(config.hurst_fn, fine, streams.stream_x, config.driver_options);
      break;
  }
  draw.w = generate_brownian(fine, streams.stream_w);
  return draw;
}

namespace {

SimulatedPath fast_from_draw(const SimConfig& config, const CoupledDraw& draw,
                             const VolatilityFunction& phi) {
  const int out_level = config.output_level;
  const std::vector<double> delta = scaling_coeffs(draw.w, out_level);
  const std::size_t cells = std::size_t{1} << out_level;       // coarse cells
  const std::size_t fine_per_cell = std::size_t{1} << out_level;
  const double bhat_scale = std::ldexp(1.0, -out_level) / std::sqrt(std::ldexp(1.0, out_level));

  SimulatedPath path;
  path.grid = DyadicGrid(out_level);
  path.route = Route::fast;
  path.config_hash = config.hash();
  path.values.resize(cells + 1);
  path.values[0] = 0.0;
  double acc = 0.0;
  std::size_t q = 0;
  for (std::size_t l = 0; l < cells; ++l) {
    double cell_sum = 0.0;
    for (std::size_t i = 0; i < fine_per_cell; ++i) cell_sum += phi(draw.x.values[q++]);
    acc += (bhat_scale * cell_sum) * delta[l];
    path.values[l + 1] = acc;
  }
  return path;
}

SimulatedPath oracle_from_draw(const SimConfig& config, const CoupledDraw& draw,
                               const VolatilityFunction& phi) {
  SimulatedPath path;
  path.grid = draw.x.grid;
  path.route = Route::oracle;
  path.config_hash = config.hash();
  path.values.resize(path.grid.size());
  path.values[0] = 0.0;
  double acc = 0.0;
  for (std::size_t q = 1; q < path.values.size(); ++q) {
    acc += phi(draw.x.values[q - 1]) * (draw.w.values[q] - draw.w.values[q - 1]);
    path.values[q] = acc;
  }
  return path;
}

SimulatedPath wavelet_from_draw(const SimConfig& config, const CoupledDraw& draw,
                                const VolatilityFunction& phi, int partial_level) {
  const int fine = config.fine_level();
  if (partial_level < 0 || partial_level + 1 > fine)
    throw std::invalid_argument("simulate_wavelet_partial: partial level " +
                                std::to_string(partial_level) +
                                " needs fine level >= " + std::to_string(partial_level + 1) +
                                "; config has " + std::to_string(fine));

  const Antiderivative antider = antiderivative(draw.x, phi);
  const HaarCoefficients coeffs = wavelet_coeffs(draw.w, partial_level);
  const double delta00 = coeffs.delta00;

  // Saturated coefficient values are independent of t; prefix sums of
  // a_{j,k}(1) * lambda_{j,k} make each output point O(partial_level).
  std::vector<std::vector<double>> prefix(static_cast<std::size_t>(partial_level) + 1);
  for (int j = 0; j <= partial_level; ++j) {
    const std::size_t count = std::size_t{1} << j;
    auto& row = prefix[static_cast<std::size_t>(j)];
    row.resize(count + 1);
    row[0] = 0.0;
    for (std::size_t k = 0; k < count; ++k)
      row[k + 1] = row[k] + coeff_a(j, static_cast<int>(k), 1.0, antider) *
                                coeffs.lambdas[static_cast<std::size_t>(j)][k];
  }

  const int out_level = config.output_level;
  SimulatedPath path;
  path.grid = DyadicGrid(out_level);
  path.route = Route::wavelet_partial;
  path.partial_level = partial_level;
  path.config_hash = config.hash();
  path.values.resize(path.grid.size());
  path.values[0] = 0.0;
  for (std::size_t m = 1; m < path.values.size(); ++m) {
    const double t = path.grid.point(m);
    const std::size_t fine_index = m << (fine - out_level);
    double sum = antider.values[fine_index] * delta00;  // b00(t) delta00
    for (int j = 0; j <= partial_level; ++j) {
      const std::size_t cell = fine_index >> (fine - j);
      const std::size_t rem = fine_index & ((std::size_t{1} << (fine - j)) - 1);
      sum += prefix[static_cast<std::size_t>(j)][cell];
      if (rem != 0)
        sum += coeff_a(j, static_cast<int>(cell), t, antider) *
               coeffs.lambdas[static_cast<std::size_t>(j)][cell];
    }
    path.values[m] = sum;
  }
  return path;
}

}  // namespace

void SimConfig::validate() const {
  if (output_level < 1)
    throw ConfigError("SimConfig: J must be >= 1; got " + std::to_string(output_level));
  if (fine_level() > kMaxFineLevel)
    throw ResourceLimitError("SimConfig: fine level 2J = " + std::to_string(fine_level()) +
                             " exceeds limit " + std::to_string(kMaxFineLevel));
  if (replicas < 1)
    throw ConfigError("SimConfig: replicas must be >= 1; got " + std::to_string(replicas));
  for (double g : gamma_list)
    if (!(g >= 0.0 && g < 0.5))
      throw ConfigError("SimConfig: gamma values must lie in [0,1/2); got " +
                        format_double(g));
  if (driver == DriverKind::multifractional_bm && !hurst_fn.h)
    throw ConfigError("SimConfig: multifractional driver requires a Hurst function");
  if (phi_name.empty()) throw ConfigError("SimConfig: missing phi");
}

std::string SimConfig::canonical_string() const {
  std::string s = "J=" + std::to_string(output_level) + ";driver=";
  switch (driver) {
    case DriverKind::brownian_motion:
      s += "bm";
      break;
    case DriverKind::fractional_bm:
      s += "fbm;H=" + format_double(hurst);
      break;
    case DriverKind::multifractional_bm: {
      s += "mbm;Hfn=" + (hurst_fn.label.empty() ? std::string("anon") : hurst_fn.label);
      if (hurst_fn.h) {
        s += ";Hsamples=";
        for (int i = 0; i <= 16; ++i) s += format_double(hurst_fn(i / 16.0)) + ",";
      }
      break;
    }
  }
  s += ";phi=" + phi_name + ";seed=" + std::to_string(master_seed) +
       ";replicas=" + std::to_string(replicas) +
       ";alpha_margin=" + format_double(driver_options.alpha_margin) + ";gammas=";
  for (double g : gamma_list) s += format_double(g) + ",";
  return s;
}

std::uint64_t SimConfig::hash() const {
  // FNV-1a over the canonical string.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_string()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

const char* route_name(Route route) {
  switch (route) {
    case Route::fast:
      return "fast";
    case Route::wavelet_partial:
      return "wavelet";
    case Route::oracle:
      return "oracle";
  }
  return "?";
}

namespace {

void check_draw(const SimConfig& config, const CoupledDraw& draw) {
  if (draw.x.grid.level() != config.fine_level() ||
      draw.w.grid.level() != config.fine_level())
    throw std::invalid_argument("route evaluation: draw grid level does not match config "
                                "fine level " + std::to_string(config.fine_level()));
}

}  // namespace

SimulatedPath simulate_fast(const SimConfig& config, const CoupledDraw& draw) {
  config.validate();
  check_draw(config, draw);
  return fast_from_draw(config, draw, preset_phi(config.phi_name));
}

SimulatedPath simulate_oracle(const SimConfig& config, const CoupledDraw& draw) {
  config.validate();
  check_draw(config, draw);
  return oracle_from_draw(config, draw, preset_phi(config.phi_name));
}

SimulatedPath simulate_wavelet_partial(const SimConfig& config, const CoupledDraw& draw,
                                       int partial_level) {
  config.validate();
  check_draw(config, draw);
  return wavelet_from_draw(config, draw, preset_phi(config.phi_name), partial_level);
}

SimulatedPath simulate_fast(const SimConfig& config) {
  return simulate_fast(config, coupled_draw(config));
}

SimulatedPath simulate_oracle(const SimConfig& config) {
  return simulate_oracle(config, coupled_draw(config));
}

SimulatedPath simulate_wavelet_partial(const SimConfig& config, int partial_level) {
  return simulate_wavelet_partial(config, coupled_draw(config), partial_level);
}

PathTriple simulate_coupled(const SimConfig& config, bool with_wavelet,
                            int wavelet_partial_level) {
  const CoupledDraw draw = coupled_draw(config);
  const VolatilityFunction phi = preset_phi(config.phi_name);
  PathTriple triple;
  triple.fast = fast_from_draw(config, draw, phi);
  triple.oracle = oracle_from_draw(config, draw, phi);
  if (with_wavelet) {
    const int partial =
        (wavelet_partial_level >= 0) ? wavelet_partial_level : config.output_level - 1;
    triple.wavelet = wavelet_from_draw(config, draw, phi, partial);
  }
  return triple;
}

std::vector<PathTriple> run_ensemble(const SimConfig& config) {
  config.validate();
  std::vector<PathTriple> ensemble;
  ensemble.reserve(static_cast<std::size_t>(config.replicas));
  for (int r = 0; r < config.replicas; ++r) {
    SimConfig replica = config;
    replica.master_seed = config.master_seed ^ static_cast<std::uint64_t>(r);
    replica.replicas = 1;
    ensemble.push_back(simulate_coupled(replica));
  }
  return ensemble;
}

std::vector<double> restrict_values(const SimulatedPath& path, int coarse_level) {
  if (coarse_level > path.grid.level())
    throw std::invalid_argument("restrict_values: target level " +
                                std::to_string(coarse_level) + " finer than path level " +
                                std::to_string(path.grid.level()));
  const int shift = path.grid.level() - coarse_level;
  const std::size_t count = (std::size_t{1} << coarse_level) + 1;
  std::vector<double> out(count);
  for (std::size_t m = 0; m < count; ++m) out[m] = path.values[m << shift];
  return out;
}

std::vector<double> interpolate_values(const SimulatedPath& path, int fine_level) {
  if (fine_level < path.grid.level())
    throw std::invalid_argument("interpolate_values: target level " +
                                std::to_string(fine_level) + " coarser than path level " +
                                std::to_string(path.grid.level()));
  const int shift = fine_level - path.grid.level();
  const std::size_t stride = std::size_t{1} << shift;
  const std::size_t cells = std::size_t{1} << path.grid.level();
  std::vector<double> out((std::size_t{1} << fine_level) + 1);
  for (std::size_t m = 0; m < cells; ++m) {
    const double lo = path.values[m];
    const double hi = path.values[m + 1];
    for (std::size_t i = 0; i < stride; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(stride);
      out[m * stride + i] = lo + (hi - lo) * frac;
    }
  }
  out.back() = path.values.back();
  return out;
}

}  // namespace haarvol
