#pragma once

#include <array>
#include <cstdint>

namespace htea {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z);

// Advances a SplitMix64 state and returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Pinned seed-combining function. Used for per-level instance seeds,
// per-stream RNG seeds and per-run experiment seeds.
//   mix(a, b) = mix64(mix64(a + 0x9E3779B97F4A7C15) ^ (b + 0xD1B54A32D192ED03))
std::uint64_t mix(std::uint64_t a, std::uint64_t b);
std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c);

// xoshiro256** 1.0 (Blackman, Vigna) whose 256-bit state is filled with four
// consecutive SplitMix64 outputs started at mix(master_seed, stream_id).
class RngStream {
 public:
  using State = std::array<std::uint64_t, 4>;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  // Raw state constructor, used by reference-vector tests.
  static RngStream from_state(const State& s);

  std::uint64_t next_u64();

  // Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift with
  // rejection, so the result is exact and portable.
  std::uint64_t below(std::uint64_t bound);

  // Uniform integer in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi);

  // 53-bit uniform double in [0, 1).
  double uniform01();

  // 53-bit uniform double in (0, 1].
  double uniform_pos();

  bool bernoulli(double p);

  const State& state() const { return s_; }

 private:
  RngStream() = default;
  State s_{};
};

}  // namespace htea
