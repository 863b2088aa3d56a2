#pragma once

#include <array>
#include <cstdint>

namespace haarvol {

// Counter-based random stream (Philox4x32-10). A stream is addressed by
// (master_seed, stream_id); draws are a pure function of that address and the
// draw counter, so equal seeds reproduce bit-identical sequences and distinct
// stream ids are statistically independent without any jump-ahead state.
//
// Stream id conventions used across the library:
//   0 -> volatility driver X        1 -> Brownian integrator W
//   2.. -> auxiliary (tests, Monte Carlo replica loops)
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1); safe as inverse-CDF input.
  double next_uniform();

  // Standard normal via the inverse CDF (Wichura's AS241, double precision).
  double next_normal();

 private:
  void refill();

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

struct RngStreams {
  std::uint64_t master_seed;
  RngStream stream_x;
  RngStream stream_w;
};

inline RngStreams make_streams(std::uint64_t master_seed) {
  return RngStreams{master_seed, RngStream(master_seed, 0), RngStream(master_seed, 1)};
}

// Inverse standard normal CDF, accurate to ~1e-15 for p in (0,1).
double inverse_normal_cdf(double p);

}  // namespace haarvol
