#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "coinweigh/core.hpp"
#include "coinweigh/decode_table.hpp"

#include "json.hpp"

namespace coinweigh {

/// Three disjoint blocks of equal size 2^label_len, each holding exactly one
/// forged coin, plus the bisection counts that produced them. The first
/// phase costs l1 weighings, the second and third phases cost l2 each.
struct Stage0Result {
  Block t1, t2, t3;
  std::uint32_t l1 = 0;
  std::uint32_t l2 = 0;
  std::uint32_t label_len = 0;  // m - l1 - l2
};

/// A digit position whose first weighing left the three hidden digits
/// undetermined (outcome 1 or 2).
struct AmbiguityRecord {
  std::uint32_t position;
  WeighOutcome first;

  AmbiguityRecord(std::uint32_t position_, WeighOutcome first_)
      : position(position_), first(first_) {
    if (first.value != 1 && first.value != 2)
      throw ContractError("AmbiguityRecord: first outcome must be 1 or 2");
  }
};

/// Per-position digit knowledge after the static weighings: 0 or 1 where all
/// three hidden digits are pinned, -1 at ambiguous positions.
struct Stage1Result {
  std::vector<int> digits;
  std::vector<AmbiguityRecord> ambiguities;  // ascending position
};

struct TraceEntry {
  SubsetDescriptor subset;
  WeighOutcome outcome;
};

/// Full record of one run: every weighing in order, the stage counters, and
/// the recovered forged coins. total = l1 + 2*l2 + label_len + l3 and never
/// exceeds 2m - 1.
struct SearchTrace {
  std::uint32_t m = 0;
  std::array<std::uint64_t, 3> forged{};  // sorted
  std::uint32_t l1 = 0;
  std::uint32_t l2 = 0;
  std::uint32_t l3 = 0;
  std::uint32_t label_len = 0;
  std::uint64_t total = 0;
  std::vector<TraceEntry> weighings;
  std::array<std::uint64_t, 3> recovered{};  // sorted
};

nlohmann::ordered_json to_json(const SubsetDescriptor& subset);
nlohmann::ordered_json to_json(const SearchTrace& trace);

namespace detail {

template <WeighingOracle O>
WeighOutcome weigh_and_record(O& oracle, SubsetDescriptor subset,
                              std::vector<TraceEntry>* trace) {
  WeighOutcome r = oracle.weigh(subset);
  if (r.value < 0 || r.value > 3)
    throw CorruptedOracleError("weighing outcome " + std::to_string(r.value) +
                               " outside {0,1,2,3}");
  if (trace) trace->push_back(TraceEntry{std::move(subset), r});
  return r;
}

// k forged coins are known to lie in a block split into halves of
// `half_size`; an outcome claiming more coins than fit in either half is
// impossible for any placement.
inline void require_feasible_split(int outcome, int k, std::uint64_t half_size) {
  if (outcome < 0 || outcome > k ||
      static_cast<std::uint64_t>(outcome) > half_size ||
      static_cast<std::uint64_t>(k - outcome) > half_size)
    throw CorruptedOracleError("outcome " + std::to_string(outcome) +
                               " impossible for a half of size " + std::to_string(half_size) +
                               " holding " + std::to_string(k) + " forged coins");
}

}  // namespace detail

/// First stage: bisections. Halve the block known to hold all three forged
/// coins, always weighing the lower half, until the outcome is 1 or 2 (l1
/// weighings); then halve the two-coin side until the outcome is 1 (l2
/// weighings), giving T1 and T2; finally bisect the one-coin side exactly l2
/// more times, giving T3. Exactly l1 + 2*l2 queries.
template <WeighingOracle O>
Stage0Result isolate_blocks(O& oracle, std::vector<TraceEntry>* trace = nullptr) {
  const ProblemInstance& inst = oracle.instance();

  auto weigh_lower = [&](const Block& block) {
    if (block.size < 2) throw CorruptedOracleError("cannot bisect a block of size < 2");
    return detail::weigh_and_record(oracle, IntervalHalf{block, Half::lower}, trace);
  };

  // Split the three coins into a one-coin side and a two-coin side.
  Block cur{0, inst.coin_count()};
  Block one, two;
  std::uint32_t l1 = 0;
  for (;;) {
    WeighOutcome r = weigh_lower(cur);
    ++l1;
    detail::require_feasible_split(r.value, 3, cur.size / 2);
    if (r.value == 3) {
      cur = cur.lower_half();
    } else if (r.value == 0) {
      cur = cur.upper_half();
    } else if (r.value == 1) {
      one = cur.lower_half();
      two = cur.upper_half();
      break;
    } else {
      one = cur.upper_half();
      two = cur.lower_half();
      break;
    }
  }

  // Split the two-coin side into T1 and T2.
  cur = two;
  Block t1, t2;
  std::uint32_t l2 = 0;
  for (;;) {
    WeighOutcome r = weigh_lower(cur);
    ++l2;
    detail::require_feasible_split(r.value, 2, cur.size / 2);
    if (r.value == 2) {
      cur = cur.lower_half();
    } else if (r.value == 0) {
      cur = cur.upper_half();
    } else {
      t1 = cur.lower_half();
      t2 = cur.upper_half();
      break;
    }
  }

  // Narrow the one-coin side by exactly l2 bisections, giving T3. Always all
  // l2 of them, even when fewer would pin the coin: the blocks must end up
  // the same size.
  cur = one;
  for (std::uint32_t i = 0; i < l2; ++i) {
    WeighOutcome r = weigh_lower(cur);
    detail::require_feasible_split(r.value, 1, cur.size / 2);
    cur = (r.value == 1) ? cur.lower_half() : cur.upper_half();
  }
  Block t3 = cur;

  const std::uint32_t m = inst.m();
  if (l1 < 1 || l1 > m - 1 || l2 < 1 || l1 + l2 > m || t1.size != t2.size || t1.size != t3.size)
    throw ContractError("isolate_blocks: inconsistent stage outcome");
  Stage0Result out{t1, t2, t3, l1, l2, m - l1 - l2};
  if (t1.size != std::uint64_t{1} << out.label_len)
    throw ContractError("isolate_blocks: block size does not match label length");
  return out;
}

/// Second stage: label_len static weighings, one per digit position. The
/// i-th subset is every coin across the three blocks whose label digit i is
/// 1, so the outcome equals the sum of the three hidden digits: 0 and 3 pin
/// all three, 1 and 2 are recorded as ambiguities.
template <WeighingOracle O>
Stage1Result weigh_digits(O& oracle, const Stage0Result& blocks,
                          std::vector<TraceEntry>* trace = nullptr) {
  Stage1Result out;
  const std::uint32_t n = blocks.label_len;
  out.digits.assign(n, -1);
  for (std::uint32_t i = 1; i <= n; ++i) {
    DigitPredicate subset{i, n,
                          {DigitGroup{blocks.t1, 1}, DigitGroup{blocks.t2, 1},
                           DigitGroup{blocks.t3, 1}}};
    WeighOutcome r = detail::weigh_and_record(oracle, subset, trace);
    if (r.value == 0) {
      out.digits[i - 1] = 0;
    } else if (r.value == 3) {
      out.digits[i - 1] = 1;
    } else {
      out.ambiguities.emplace_back(i, r);
    }
  }
  return out;
}

/// Third stage: one weighing per ambiguity, in ascending position. The
/// resolving subset takes digit-1 coins from T1 and digit-0 coins from T2
/// (T3 sits out, so an outcome of 3 is impossible); the decode table then
/// pins all three digits. Returns the three complete labels.
template <WeighingOracle O>
std::array<CoinLabel, 3> resolve_ambiguities(O& oracle, const Stage0Result& blocks,
                                             const Stage1Result& stage1,
                                             std::vector<TraceEntry>* trace = nullptr) {
  const std::uint32_t n = blocks.label_len;
  std::array<std::uint64_t, 3> values{0, 0, 0};
  auto next_ambiguity = stage1.ambiguities.begin();
  for (std::uint32_t i = 1; i <= n; ++i) {
    std::array<int, 3> digit_triple;
    if (stage1.digits[i - 1] >= 0) {
      int d = stage1.digits[i - 1];
      digit_triple = {d, d, d};
    } else {
      if (next_ambiguity == stage1.ambiguities.end() || next_ambiguity->position != i)
        throw ContractError("resolve_ambiguities: ambiguity list out of step");
      DigitPredicate subset{i, n,
                            {DigitGroup{blocks.t1, 1}, DigitGroup{blocks.t2, 0}, std::nullopt}};
      WeighOutcome r = detail::weigh_and_record(oracle, subset, trace);
      if (r.value == 3)
        throw CorruptedOracleError("resolving weighing returned 3 but excludes one forged coin");
      digit_triple = decode_row(next_ambiguity->first.value, r.value);
      ++next_ambiguity;
    }
    for (int j = 0; j < 3; ++j) values[j] = (values[j] << 1) | static_cast<unsigned>(digit_triple[j]);
  }
  if (next_ambiguity != stage1.ambiguities.end())
    throw ContractError("resolve_ambiguities: unconsumed ambiguities");
  return {CoinLabel{n, values[0]}, CoinLabel{n, values[1]}, CoinLabel{n, values[2]}};
}

/// Full run: isolate blocks, weigh digits, resolve ambiguities, and convert
/// the labels back to absolute coin indices. Deterministic: identical
/// instances produce byte-identical traces.
template <WeighingOracle O>
SearchTrace search(O& oracle) {
  SearchTrace trace;
  const ProblemInstance& inst = oracle.instance();
  trace.m = inst.m();
  trace.forged = inst.forged();

  const std::uint64_t queries_before = oracle.query_count();
  Stage0Result blocks = isolate_blocks(oracle, &trace.weighings);
  Stage1Result stage1 = weigh_digits(oracle, blocks, &trace.weighings);
  std::array<CoinLabel, 3> labels = resolve_ambiguities(oracle, blocks, stage1, &trace.weighings);

  trace.l1 = blocks.l1;
  trace.l2 = blocks.l2;
  trace.l3 = static_cast<std::uint32_t>(stage1.ambiguities.size());
  trace.label_len = blocks.label_len;
  trace.recovered = {blocks.t1.base + labels[0].value, blocks.t2.base + labels[1].value,
                     blocks.t3.base + labels[2].value};
  std::sort(trace.recovered.begin(), trace.recovered.end());

  trace.total = trace.l1 + 2ull * trace.l2 + trace.label_len + trace.l3;
  if (trace.total != trace.weighings.size() ||
      trace.total != oracle.query_count() - queries_before)
    throw ContractError("search: weighing count does not match the stage accounting");
  return trace;
}

}  // namespace coinweigh
