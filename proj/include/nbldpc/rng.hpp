#pragma once
#include <cstdint>
#include <utility>

namespace nbldpc {

// Philox4x32-10 counter generator. Chosen over <random> engines because a
// counter generator gives an independent, reproducible stream per (seed,
// stream_id) pair with O(1) setup, which is what per-trial noise matching
// across parameter grids and worker counts requires. Gaussians come from
// Box-Muller on the raw uniforms: bitwise reproducible on any platform.
struct RngStream {
  RngStream(uint64_t seed, uint64_t stream_id);

  uint32_t next_u32();
  uint64_t next_u64();
  // uniform in [0,1) with 53-bit resolution
  double uniform01();
  // uniform in (0,1]: safe as a log() argument
  double uniform01_open();
  double gaussian();

 private:
  void refill();
  uint32_t key_[2];
  uint32_t ctr_hi_[2];  // stream id
  uint64_t block_ = 0;  // low 64 bits of the counter
  uint32_t buf_[4];
  int buf_pos_ = 4;
  double gauss_spare_ = 0.0;
  bool has_spare_ = false;
};

// Distinct sub-streams per trial so that trial t's noise depends only on
// (seed, t, purpose), never on grid point, decoder, or worker layout.
enum class StreamPurpose : uint64_t {
  channel_noise = 0,
  codeword_draw = 1,
  test_points = 2,
};

inline RngStream trial_stream(uint64_t seed, uint64_t trial,
                              StreamPurpose purpose = StreamPurpose::channel_noise) {
  return RngStream(seed, trial * 8 + static_cast<uint64_t>(purpose));
}

}  // namespace nbldpc
