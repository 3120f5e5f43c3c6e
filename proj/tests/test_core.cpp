#include <algorithm>
#include <set>

#include "coinweigh/core.hpp"
#include "coinweigh/rng.hpp"

#include "doctest.h"

using namespace coinweigh;

namespace {

// Brute-force weight of a descriptor: |forged ∩ materialize(d)|. The
// independent route every symbolic weighing is checked against.
int explicit_weight(const ProblemInstance& inst, const SubsetDescriptor& d) {
  int n = 0;
  for (std::uint64_t coin : materialize(d, inst.coin_count()))
    if (inst.is_forged(coin)) ++n;
  return n;
}

std::array<std::uint64_t, 3> random_forged(SplitMix64& gen, std::uint32_t m) {
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  std::uint64_t a = gen.next() & mask;
  std::uint64_t b;
  do { b = gen.next() & mask; } while (b == a);
  std::uint64_t c;
  do { c = gen.next() & mask; } while (c == a || c == b);
  return {a, b, c};
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("problem instance validation") {
  ProblemInstance inst(2, {2, 0, 1});
  CHECK(inst.coin_count() == 4);
  CHECK(inst.forged() == std::array<std::uint64_t, 3>{0, 1, 2});  // sorted
  CHECK(inst.is_forged(2));
  CHECK_FALSE(inst.is_forged(3));

  CHECK_THROWS_AS(ProblemInstance(1, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(ProblemInstance(2, {0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ProblemInstance(2, {0, 1, 4}), std::invalid_argument);
}

TEST_CASE("weigh explicit subsets") {
  ScaleOracle oracle(ProblemInstance(2, {0, 1, 2}));
  CHECK(oracle.weigh(Explicit{{}}).value == 0);
  CHECK(oracle.weigh(Explicit{{0, 1, 2, 3}}).value == 3);
  CHECK(oracle.query_count() == 2);
}

TEST_CASE("weigh interval halves") {
  ScaleOracle oracle(ProblemInstance(2, {0, 1, 2}));
  CHECK(oracle.weigh(IntervalHalf{{0, 4}, Half::lower}).value == 2);
  CHECK(oracle.weigh(IntervalHalf{{0, 4}, Half::upper}).value == 1);
  CHECK(oracle.weigh(IntervalHalf{{0, 2}, Half::lower}).value == 1);
  CHECK(oracle.query_count() == 3);
}

TEST_CASE("weigh digit predicates without materializing") {
  // blocks {4,5}, {6,7}, {0,1} with 1-digit labels; forged 0, 4, 7
  ProblemInstance inst(3, {0, 4, 7});
  ScaleOracle oracle(inst);
  DigitPredicate all_ones{1, 1, {DigitGroup{{4, 2}, 1}, DigitGroup{{6, 2}, 1}, DigitGroup{{0, 2}, 1}}};
  CHECK(oracle.weigh(all_ones).value == 1);  // only coin 7 has digit 1
  DigitPredicate resolving{1, 1, {DigitGroup{{4, 2}, 1}, DigitGroup{{6, 2}, 0}, std::nullopt}};
  CHECK(oracle.weigh(resolving).value == 0);  // {5, 6} holds no forged coin
}

TEST_CASE("descriptor validation errors") {
  ScaleOracle oracle(ProblemInstance(3, {0, 1, 2}));
  // digit position out of range
  CHECK_THROWS_AS(oracle.weigh(DigitPredicate{2, 1, {DigitGroup{{0, 2}, 1}, std::nullopt, std::nullopt}}),
                  DescriptorError);
  // misaligned interval
  CHECK_THROWS_AS(oracle.weigh(IntervalHalf{{1, 2}, Half::lower}), DescriptorError);
  // interval of size 1 cannot be halved
  CHECK_THROWS_AS(oracle.weigh(IntervalHalf{{0, 1}, Half::lower}), DescriptorError);
  // non-power-of-two block
  CHECK_THROWS_AS(oracle.weigh(IntervalHalf{{0, 6}, Half::lower}), DescriptorError);
  // block exceeding the pool
  CHECK_THROWS_AS(oracle.weigh(IntervalHalf{{8, 8}, Half::lower}), DescriptorError);
  // overlapping groups
  CHECK_THROWS_AS(oracle.weigh(DigitPredicate{1, 1, {DigitGroup{{0, 2}, 1}, DigitGroup{{0, 2}, 0}, std::nullopt}}),
                  DescriptorError);
  // duplicate explicit coins
  CHECK_THROWS_AS(oracle.weigh(Explicit{{1, 1}}), DescriptorError);
  // out-of-range explicit coin
  CHECK_THROWS_AS(oracle.weigh(Explicit{{8}}), DescriptorError);
  // failed weighings do not count
  CHECK(oracle.query_count() == 0);
}

TEST_CASE("materialize matches the definitions") {
  CHECK(materialize(IntervalHalf{{0, 4}, Half::lower}, 4) == std::vector<std::uint64_t>{0, 1});
  CHECK(materialize(IntervalHalf{{0, 4}, Half::upper}, 4) == std::vector<std::uint64_t>{2, 3});
  // one 2-coin block with 1-digit labels: digit 1 selects the odd offset
  CHECK(materialize(DigitPredicate{1, 1, {DigitGroup{{4, 2}, 1}, std::nullopt, std::nullopt}}, 8) ==
        std::vector<std::uint64_t>{5});
  CHECK(materialize(Explicit{{3, 1}}, 4) == std::vector<std::uint64_t>{1, 3});
  CHECK_THROWS_AS(materialize(Explicit{{0}}, std::uint64_t{1} << 13), SizeError);
}

TEST_CASE("oracle equivalence: symbolic weigh == explicit weigh") {
  // random descriptors over random small instances
  SplitMix64 gen(0x1234u);
  for (int iter = 0; iter < 500; ++iter) {
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(gen.next() % 5);  // 2..6
    ProblemInstance inst(m, random_forged(gen, m));
    ScaleOracle oracle(inst);

    SubsetDescriptor d;
    switch (gen.next() % 3) {
      case 0: {
        // random aligned block of size >= 2
        std::uint32_t level = 1 + static_cast<std::uint32_t>(gen.next() % m);
        std::uint64_t size = std::uint64_t{1} << level;
        std::uint64_t base = (gen.next() % (inst.coin_count() / size)) * size;
        d = IntervalHalf{{base, size}, (gen.next() & 1) ? Half::lower : Half::upper};
        break;
      }
      case 1: {
        // up to three disjoint equal-size blocks carved from the pool
        std::uint32_t n = static_cast<std::uint32_t>(gen.next() % m);
        if (n == 0) n = 1;
        std::uint64_t size = std::uint64_t{1} << n;
        std::uint64_t slots = inst.coin_count() / size;
        DigitPredicate dp{1 + static_cast<std::uint32_t>(gen.next() % n), n, {}};
        std::set<std::uint64_t> used;
        int groups = 1 + static_cast<int>(gen.next() % std::min<std::uint64_t>(3, slots));
        for (int g = 0; g < groups; ++g) {
          std::uint64_t slot;
          do { slot = gen.next() % slots; } while (used.count(slot));
          used.insert(slot);
          dp.groups[g] = DigitGroup{{slot * size, size}, static_cast<int>(gen.next() & 1)};
        }
        d = dp;
        break;
      }
      default: {
        Explicit e;
        for (std::uint64_t coin = 0; coin < inst.coin_count(); ++coin)
          if (gen.next() & 1) e.coins.push_back(coin);
        d = e;
        break;
      }
    }

    CAPTURE(m);
    CHECK(oracle.weigh(d).value == explicit_weight(inst, d));
  }
}

TEST_CASE("weighing a partition of the pool sums to 3") {
  SplitMix64 gen(0x77);
  for (int iter = 0; iter < 200; ++iter) {
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(gen.next() % 5);
    ProblemInstance inst(m, random_forged(gen, m));
    ScaleOracle oracle(inst);
    int lower = oracle.weigh(IntervalHalf{{0, inst.coin_count()}, Half::lower}).value;
    int upper = oracle.weigh(IntervalHalf{{0, inst.coin_count()}, Half::upper}).value;
    CHECK(lower + upper == 3);
    // a digit predicate and its complement also partition their blocks
    DigitPredicate ones{1, m - 1, {DigitGroup{{0, inst.coin_count() / 2}, 1},
                                   DigitGroup{{inst.coin_count() / 2, inst.coin_count() / 2}, 1},
                                   std::nullopt}};
    DigitPredicate zeros{1, m - 1, {DigitGroup{{0, inst.coin_count() / 2}, 0},
                                    DigitGroup{{inst.coin_count() / 2, inst.coin_count() / 2}, 0},
                                    std::nullopt}};
    CHECK(oracle.weigh(ones).value + oracle.weigh(zeros).value == 3);
  }
}

TEST_CASE("cross-check mode accepts honest weighings and bounds the pool") {
  ScaleOracle checked(ProblemInstance(4, {1, 7, 12}), /*cross_check=*/true);
  CHECK(checked.weigh(IntervalHalf{{0, 16}, Half::lower}).value == 2);
  CHECK_THROWS_AS(ScaleOracle(ProblemInstance(13, {0, 1, 2}), true), SizeError);
}

TEST_CASE("coin labels read most significant digit first") {
  CoinLabel label{3, 0b101};
  CHECK(label.digit(1) == 1);
  CHECK(label.digit(2) == 0);
  CHECK(label.digit(3) == 1);
  CHECK(label.bits() == std::vector<int>{1, 0, 1});
  CHECK_THROWS_AS(label.digit(0), ContractError);
  CHECK_THROWS_AS(label.digit(4), ContractError);
  CHECK(CoinLabel{}.bits().empty());  // empty label is legal
}

}  // TEST_SUITE
