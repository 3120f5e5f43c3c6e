#include "coinweigh/verify.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "coinweigh/rng.hpp"
#include "coinweigh/search.hpp"

namespace coinweigh {

namespace {

struct Accumulator {
  std::uint64_t placements = 0;
  std::uint64_t sum_totals = 0;
  std::uint32_t max_total = 0;
  std::vector<std::uint64_t> histogram;  // indexed by total
  std::vector<SweepFailure> failures;

  void merge(const Accumulator& other) {
    placements += other.placements;
    sum_totals += other.sum_totals;
    max_total = std::max(max_total, other.max_total);
    if (histogram.size() < other.histogram.size()) histogram.resize(other.histogram.size());
    for (std::size_t i = 0; i < other.histogram.size(); ++i) histogram[i] += other.histogram[i];
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  }
};

// Runs one placement end to end and records the outcome. Any correctness or
// accounting violation becomes a failure entry, not an exception: the sweep
// reports, the caller judges.
void check_placement(std::uint32_t m, std::array<std::uint64_t, 3> forged, bool cross_check,
                     Accumulator& acc) {
  ++acc.placements;
  ScaleOracle oracle(ProblemInstance(m, forged), cross_check);
  SearchTrace trace;
  try {
    trace = search(oracle);
  } catch (const std::exception& e) {
    acc.failures.push_back({forged, std::string("exception: ") + e.what()});
    return;
  }

  std::array<std::uint64_t, 3> expected = forged;
  std::sort(expected.begin(), expected.end());
  if (trace.recovered != expected)
    acc.failures.push_back({forged, "recovered set differs from forged set"});
  if (trace.total != trace.l1 + 2ull * trace.l2 + trace.label_len + trace.l3)
    acc.failures.push_back({forged, "total != l1 + 2*l2 + n + l3"});
  if (trace.total > 2ull * m - 1) acc.failures.push_back({forged, "total exceeds 2m - 1"});
  if (oracle.query_count() != trace.total || trace.weighings.size() != trace.total)
    acc.failures.push_back({forged, "query counter disagrees with trace"});

  acc.sum_totals += trace.total;
  acc.max_total = std::max(acc.max_total, static_cast<std::uint32_t>(trace.total));
  if (acc.histogram.size() <= trace.total) acc.histogram.resize(trace.total + 1);
  ++acc.histogram[trace.total];
}

int resolve_threads(int requested, std::uint64_t work_items) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (static_cast<std::uint64_t>(n) > work_items) n = static_cast<int>(std::max<std::uint64_t>(work_items, 1));
  return n;
}

}  // namespace

SweepReport exhaustive_verify(std::uint32_t m, SweepOptions options) {
  if (m < 2 || m > 7)
    throw SizeError("exhaustive_verify: supported for 2 <= m <= 7");
  const std::uint64_t t = std::uint64_t{1} << m;

  // Partition by first coin; every worker owns private oracles and
  // accumulators, merged in worker order.
  const int threads = resolve_threads(options.threads, t - 2);
  std::vector<Accumulator> parts(threads);
  auto work = [&](int w) {
    Accumulator& acc = parts[w];
    for (std::uint64_t a = w; a + 2 < t; a += threads)
      for (std::uint64_t b = a + 1; b + 1 < t; ++b)
        for (std::uint64_t c = b + 1; c < t; ++c)
          check_placement(m, {a, b, c}, options.cross_check, acc);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (std::thread& th : pool) th.join();
  }

  Accumulator total;
  for (const Accumulator& part : parts) total.merge(part);
  // Failure order must not depend on the partitioning.
  std::sort(total.failures.begin(), total.failures.end(),
            [](const SweepFailure& x, const SweepFailure& y) {
              return x.forged != y.forged ? x.forged < y.forged : x.reason < y.reason;
            });

  SweepReport report;
  report.m = m;
  report.placements_checked = total.placements;
  report.failures = std::move(total.failures);
  for (std::size_t v = 0; v < total.histogram.size(); ++v)
    if (total.histogram[v] > 0) report.histogram[static_cast<std::uint32_t>(v)] = total.histogram[v];
  const std::uint64_t expected_placements = t * (t - 1) * (t - 2) / 6;
  if (report.placements_checked != expected_placements)
    throw ContractError("exhaustive_verify: placement count mismatch");
  report.exact_mean = Rational(static_cast<long long>(total.sum_totals),
                               static_cast<long long>(expected_placements));
  report.max_total = total.max_total;
  report.cross_checked = options.cross_check;
  return report;
}

Rational exact_mean(std::uint32_t m) { return exhaustive_verify(m).exact_mean; }

std::array<std::uint64_t, 3> sample_placement(std::uint32_t m, std::uint64_t seed,
                                              std::uint64_t trial) {
  SplitMix64 gen = trial_stream(seed, trial);
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;  // pool size is a power of two
  std::uint64_t a = gen.next() & mask;
  std::uint64_t b;
  do {
    b = gen.next() & mask;
  } while (b == a);
  std::uint64_t c;
  do {
    c = gen.next() & mask;
  } while (c == a || c == b);
  return {a, b, c};
}

MonteCarloReport monte_carlo(std::uint32_t m, std::uint64_t trials, std::uint64_t seed,
                             int threads) {
  if (m < 2 || m > 62) throw SizeError("monte_carlo: m must be in [2, 62]");
  if (trials < 1) throw SizeError("monte_carlo: at least one trial");

  struct Sums {
    std::uint64_t total = 0;
    std::uint64_t total_sq = 0;
  };
  const int n_workers = resolve_threads(threads, trials);
  std::vector<Sums> parts(n_workers);
  auto work = [&](int w) {
    Sums& sums = parts[w];
    for (std::uint64_t trial = w; trial < trials; trial += n_workers) {
      ScaleOracle oracle(ProblemInstance(m, sample_placement(m, seed, trial)));
      SearchTrace trace = search(oracle);
      sums.total += trace.total;
      sums.total_sq += trace.total * trace.total;
    }
  };
  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
    for (std::thread& th : pool) th.join();
  }

  // Integer sums make the merge exact, so the report is bit-identical at any
  // worker count.
  std::uint64_t sum = 0, sum_sq = 0;
  for (const Sums& s : parts) {
    sum += s.total;
    sum_sq += s.total_sq;
  }

  MonteCarloReport report;
  report.m = m;
  report.trials = trials;
  report.seed = seed;
  report.mean = static_cast<double>(sum) / static_cast<double>(trials);
  if (trials > 1) {
    __int128 num = static_cast<__int128>(trials) * sum_sq - static_cast<__int128>(sum) * sum;
    double variance = static_cast<double>(num) /
                      (static_cast<double>(trials) * static_cast<double>(trials - 1));
    report.stddev = std::sqrt(std::max(variance, 0.0));
  }
  report.std_error = report.stddev / std::sqrt(static_cast<double>(trials));
  return report;
}

nlohmann::ordered_json to_json(const SweepReport& report) {
  using json = nlohmann::ordered_json;
  json failures = json::array();
  for (const SweepFailure& f : report.failures)
    failures.push_back(json{{"forged", f.forged}, {"reason", f.reason}});
  json histogram = json::array();
  for (const auto& [total, count] : report.histogram)
    histogram.push_back(json{{"total", total}, {"count", count}});
  return json{{"m", report.m},
              {"placements", report.placements_checked},
              {"failures", std::move(failures)},
              {"max_total", report.max_total},
              {"exact_mean", report.exact_mean.str()},
              {"exact_mean_decimal", report.exact_mean.to_double()},
              {"cross_checked", report.cross_checked},
              {"histogram", std::move(histogram)}};
}

nlohmann::ordered_json to_json(const MonteCarloReport& report) {
  return nlohmann::ordered_json{{"m", report.m},         {"trials", report.trials},
                                {"seed", report.seed},   {"mean", report.mean},
                                {"stddev", report.stddev}, {"stderr", report.std_error}};
}

}  // namespace coinweigh
