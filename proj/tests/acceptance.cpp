// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Run directly or through `ctest -R acceptance`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coinweigh/analysis.hpp"
#include "coinweigh/channel.hpp"
#include "coinweigh/decode_table.hpp"
#include "coinweigh/search.hpp"
#include "coinweigh/verify.hpp"

using namespace coinweigh;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// 1. The eight decode rows, asserted in both guises: as the ambiguity table
// of the search and as the decoder table of the channel code.
void criterion_table_fidelity() {
  auto start = std::chrono::steady_clock::now();
  struct Row {
    int first;
    int second;  // -1: none
    std::array<int, 3> bits;
  };
  const std::vector<Row> expected = {
      {0, -1, {0, 0, 0}}, {3, -1, {1, 1, 1}}, {1, 0, {0, 1, 0}}, {1, 1, {0, 0, 1}},
      {1, 2, {1, 0, 0}},  {2, 0, {0, 1, 1}}, {2, 1, {1, 1, 0}}, {2, 2, {1, 0, 1}},
  };
  bool ok = DecodeTable::kRows.size() == 8;
  for (const Row& row : expected) {
    std::optional<int> second;
    if (row.second >= 0) second = row.second;
    // search-side lookup
    if (decode_row(row.first, second) != row.bits) ok = false;
    // channel-side decode of a one-position transcript
    std::vector<int> stage1{row.first};
    std::vector<int> stage2;
    if (second) stage2.push_back(*second);
    MessageTriple decoded = decode_transcript(1, stage1, stage2);
    for (int user = 0; user < 3; ++user)
      if (decoded.messages[user] != static_cast<std::uint64_t>(row.bits[user])) ok = false;
  }
  double elapsed = seconds_since(start);
  report(1, "table fidelity: 8 rows, search and channel views", ok && elapsed < 0.001,
         fmt(elapsed * 1000) + " ms");
}

std::map<std::uint32_t, SweepReport> g_sweeps;

// 2. Every placement for m = 2..7 recovered with a valid trace.
void criterion_exhaustive_correctness() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  std::uint64_t placements = 0;
  for (std::uint32_t m = 2; m <= 7; ++m) {
    SweepReport report = exhaustive_verify(m);
    const std::uint64_t t = std::uint64_t{1} << m;
    ok = ok && report.failures.empty();
    ok = ok && report.placements_checked == t * (t - 1) * (t - 2) / 6;
    ok = ok && report.max_total <= 2 * m - 1;
    placements += report.placements_checked;
    g_sweeps.emplace(m, std::move(report));
  }
  double elapsed = seconds_since(start);
  ok = ok && elapsed < 60.0;
  report(2, "exhaustive correctness: m = 2..7, budget <= 2m-1",
         ok, std::to_string(placements) + " placements, " + fmt(elapsed) + " s");
}

// 3. The nested sum equals the closed form to 1e-9 relative for m = 2..40.
void criterion_formula_identity() {
  bool ok = true;
  for (int m = 2; m <= 40; ++m) {
    double sum = mean_triple_sum(m);
    double closed = mean_closed_form(m);
    if (std::abs(sum - closed) > 1e-9 * std::max(1.0, closed)) ok = false;
  }
  ok = ok && std::abs(mean_triple_sum(2) - 0.75) < 1e-12;
  ok = ok && std::abs(mean_closed_form(2) - 0.75) < 1e-12;
  ok = ok && std::abs(mean_triple_sum(3) - 2.53125) < 1e-12;
  ok = ok && std::abs(mean_closed_form(3) - 2.53125) < 1e-12;
  report(3, "formula identity: sum == closed form, m = 2..40; anchors 0.75 and 2.53125", ok, "");
}

// 4. m / mean approaches 4/7; the gap shrinks through m = 10, 20, 40, 80.
void criterion_asymptotic_rate() {
  const double limit = asymptotic_rate().to_double();
  double at_1000 = 1000.0 / mean_closed_form(1000);
  bool ok = std::abs(at_1000 - limit) < 1e-3;
  double prev = 1.0;
  for (int m : {10, 20, 40, 80}) {
    double gap = std::abs(m / mean_closed_form(m) - limit);
    if (gap >= prev) ok = false;
    prev = gap;
  }
  report(4, "asymptotic rate: within 1e-3 of 4/7 at m = 1000, gap decreasing",
         ok, "rate(1000) = " + fmt(at_1000));
}

// 5. The enumeration mean converges toward the model mean.
void criterion_model_convergence() {
  double gap4 = std::abs(g_sweeps.at(4).exact_mean.to_double() - mean_closed_form(4));
  double gap7 = std::abs(g_sweeps.at(7).exact_mean.to_double() - mean_closed_form(7));
  report(5, "model convergence: |exact - closed| smaller at m = 7 than at m = 4",
         gap7 < gap4,
         "gap(4) = " + fmt(gap4) + ", gap(7) = " + fmt(gap7) +
             ", exact(7) = " + g_sweeps.at(7).exact_mean.str());
}

// 6. Seeded simulation lands near the model mean and reruns bit-identically.
void criterion_monte_carlo() {
  MonteCarloReport first = monte_carlo(10, 100000, 42);
  MonteCarloReport second = monte_carlo(10, 100000, 42);
  bool identical = first.mean == second.mean && first.stddev == second.stddev &&
                   first.std_error == second.std_error &&
                   to_json(first).dump() == to_json(second).dump();
  double model = mean_closed_form(10);
  bool close = std::abs(first.mean - model) < 0.15;
  report(6, "monte carlo: (m=10, 100000 trials, seed 42) within 0.15 of model, reruns identical",
         identical && close,
         "mean = " + fmt(first.mean) + ", model = " + fmt(model) +
             ", |diff| = " + fmt(std::abs(first.mean - model)));
}

// 7. Zero-error decoding over every message triple for l = 1..4.
void criterion_channel_zero_error() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::uint64_t sessions = 0;
  for (std::uint32_t l = 1; l <= 4; ++l) {
    ChannelVerifyReport report = verify_channel(l);
    ok = ok && report.decode_failures == 0 && report.law_violations == 0;
    ok = ok && report.sessions == (std::uint64_t{1} << (3 * l));
    sessions += report.sessions;
  }
  double elapsed = seconds_since(start);
  ok = ok && elapsed < 5.0;
  report(7, "channel zero-error: l = 1..4, channel law at every slot",
         ok, std::to_string(sessions) + " sessions, " + fmt(elapsed) + " s");
}

// 8. Mean slot count at l = 4 is exactly 7; the per-user rate is exactly 4/7.
void criterion_channel_mean_cost() {
  ChannelVerifyReport at4 = verify_channel(4);
  bool ok = at4.mean_transmissions == Rational(7);
  ok = ok && expected_transmissions(4) == Rational(7);
  for (long long l = 1; l <= 8; ++l)
    if (Rational(l) != Rational(0) &&
        !(Rational(4 * l, 7 * l) == asymptotic_rate()))
      ok = false;
  report(8, "channel mean cost: exact mean 7 = 7l/4 at l = 4, per-user rate 4/7",
         ok, "mean = " + at4.mean_transmissions.str());
}

// 9. Every weighing of full sweeps for m = 2..6 cross-checked against the
// explicit-set route.
void criterion_oracle_equivalence() {
  bool ok = true;
  std::string detail;
  std::uint64_t placements = 0;
  try {
    for (std::uint32_t m = 2; m <= 6; ++m) {
      SweepReport report = exhaustive_verify(m, SweepOptions{0, /*cross_check=*/true});
      ok = ok && report.failures.empty() && report.cross_checked;
      placements += report.placements_checked;
    }
    detail = std::to_string(placements) + " placements, every weighing double-checked";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(9, "oracle equivalence: symbolic == explicit for every descriptor, m <= 6", ok, detail);
}

}  // namespace

int main() {
  criterion_table_fidelity();
  criterion_exhaustive_correctness();
  criterion_formula_identity();
  criterion_asymptotic_rate();
  criterion_model_convergence();
  criterion_monte_carlo();
  criterion_channel_zero_error();
  criterion_channel_mean_cost();
  criterion_oracle_equivalence();

  if (g_failures == 0) {
    std::printf("acceptance: all 9 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
