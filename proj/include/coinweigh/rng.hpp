#pragma once

#include <cstdint>

namespace coinweigh {

/// SplitMix64 (Steele, Lea & Flood 2014). Small, fast, and bit-stable across
/// platforms, unlike the std:: distributions. All randomized reproduction in
/// this repo is defined in terms of this generator; see MANUAL.md.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

/// Independent stream for one Monte Carlo trial. Striding the initial state
/// by a second odd constant keeps the per-trial streams disjoint from the
/// in-stream golden-ratio increment, so results are a pure function of
/// (seed, trial) and never depend on how trials are partitioned over workers.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return SplitMix64(seed + trial * 0xD1B54A32D192ED03ull);
}

}  // namespace coinweigh
