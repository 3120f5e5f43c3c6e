#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coinweigh/core.hpp"
#include "coinweigh/rational.hpp"

#include "json.hpp"

namespace coinweigh {

struct SweepOptions {
  int threads = 0;          // <= 0: hardware concurrency
  bool cross_check = false; // validate every weighing against explicit sets
};

struct SweepFailure {
  std::array<std::uint64_t, 3> forged;
  std::string reason;
};

/// Ground truth for one pool exponent: every C(2^m, 3) placement searched,
/// failures recorded (an empty list is the pass condition), the exact mean
/// weighing count as a rational, and the full count histogram.
struct SweepReport {
  std::uint32_t m = 0;
  std::uint64_t placements_checked = 0;
  std::vector<SweepFailure> failures;
  std::map<std::uint32_t, std::uint64_t> histogram;  // total weighings -> placements
  Rational exact_mean;
  std::uint32_t max_total = 0;
  bool cross_checked = false;
};

/// Runs the search over every 3-subset of [0, 2^m). A placement fails if the
/// recovered set differs from the forged set, the trace breaks the
/// total = l1 + 2*l2 + n + l3 <= 2m - 1 accounting, or the oracle's query
/// counter disagrees with the trace. Supported for 2 <= m <= 7 (341,376
/// placements at m = 7); SizeError outside. Results are independent of the
/// worker count.
SweepReport exhaustive_verify(std::uint32_t m, SweepOptions options = {});

/// Exact mean weighing count over all placements (from the sweep).
Rational exact_mean(std::uint32_t m);

struct MonteCarloReport {
  std::uint32_t m = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double stddev = 0.0;     // sample standard deviation
  double std_error = 0.0;  // stddev / sqrt(trials)
};

/// Seeded simulation: `trials` placements drawn uniformly (three distinct
/// indices by rejection, one SplitMix64 stream per trial), each searched.
/// Bit-identical reports for identical (m, trials, seed) at any worker
/// count.
MonteCarloReport monte_carlo(std::uint32_t m, std::uint64_t trials, std::uint64_t seed,
                             int threads = 0);

/// The placement the given trial of monte_carlo(m, ..., seed) searches.
/// Also backs `run --seed` (which uses trial 0).
std::array<std::uint64_t, 3> sample_placement(std::uint32_t m, std::uint64_t seed,
                                              std::uint64_t trial);

nlohmann::ordered_json to_json(const SweepReport& report);
nlohmann::ordered_json to_json(const MonteCarloReport& report);

}  // namespace coinweigh
