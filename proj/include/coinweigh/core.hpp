#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace coinweigh {

// Error taxonomy. Each maps to one contract named in the public API docs.
struct DescriptorError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SizeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};
struct CorruptedOracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A pool of 2^m coins of which exactly three (distinct indices, 0-based)
/// are forged. Pools whose size is not a power of two are out of scope:
/// pad with known-genuine dummy coins first, which does not change the
/// asymptotic cost of any algorithm here.
class ProblemInstance {
 public:
  ProblemInstance(std::uint32_t m, std::array<std::uint64_t, 3> forged);

  std::uint32_t m() const { return m_; }
  std::uint64_t coin_count() const { return std::uint64_t{1} << m_; }
  /// Sorted ascending.
  const std::array<std::uint64_t, 3>& forged() const { return forged_; }
  bool is_forged(std::uint64_t coin) const {
    return coin == forged_[0] || coin == forged_[1] || coin == forged_[2];
  }

 private:
  std::uint32_t m_;
  std::array<std::uint64_t, 3> forged_;
};

/// Contiguous block of coin indices [base, base + size).
struct Block {
  std::uint64_t base = 0;
  std::uint64_t size = 0;

  bool contains(std::uint64_t coin) const { return coin >= base && coin < base + size; }
  Block lower_half() const { return {base, size / 2}; }
  Block upper_half() const { return {base + size / 2, size / 2}; }

  friend bool operator==(const Block&, const Block&) = default;
};

/// Binary label of a coin within its block: digit 1 is the most significant
/// bit of the coin's offset, so the label's value IS the offset. Empty
/// labels (length 0) are legal.
struct CoinLabel {
  std::uint32_t length = 0;
  std::uint64_t value = 0;

  /// i in [1, length], most significant first.
  int digit(std::uint32_t i) const {
    if (i < 1 || i > length) throw ContractError("CoinLabel::digit: position out of range");
    return static_cast<int>((value >> (length - i)) & 1u);
  }
  std::vector<int> bits() const {
    std::vector<int> out(length);
    for (std::uint32_t i = 1; i <= length; ++i) out[i - 1] = digit(i);
    return out;
  }

  friend bool operator==(const CoinLabel&, const CoinLabel&) = default;
};

enum class Half : std::uint8_t { lower, upper };

/// One half of an aligned block. `block` is the parent (size >= 2, a power
/// of two, base aligned to size); the weighed subset is the selected half.
struct IntervalHalf {
  Block block;
  Half half = Half::lower;

  Block selected() const { return half == Half::lower ? block.lower_half() : block.upper_half(); }
};

/// Coins of one labeled block whose label digit at `digit` equals
/// `required_bit`.
struct DigitGroup {
  Block block;
  int required_bit = 0;
};

/// Union over up to three labeled blocks (slots T1, T2, T3) of the coins
/// whose label digit at position `digit` has the group's required value.
/// Self-describing: carries the blocks and label length, so it can be
/// weighed in O(1) from the three forged positions or materialized without
/// outside context.
struct DigitPredicate {
  std::uint32_t digit = 1;      // 1-based, most significant first
  std::uint32_t label_len = 0;  // every group's block has size 2^label_len
  std::array<std::optional<DigitGroup>, 3> groups;
};

/// Explicit index list; cross-check mode only (coin_count <= 2^12).
struct Explicit {
  std::vector<std::uint64_t> coins;
};

using SubsetDescriptor = std::variant<IntervalHalf, DigitPredicate, Explicit>;

struct WeighOutcome {
  int value = 0;

  friend bool operator==(const WeighOutcome&, const WeighOutcome&) = default;
};

/// Throws DescriptorError unless `subset` is well-formed for a pool of
/// `coin_count` coins.
void validate_descriptor(const SubsetDescriptor& subset, std::uint64_t coin_count);

/// Expands a descriptor to its sorted explicit index list. Cross-check path
/// for small pools only; throws SizeError when coin_count > 2^12.
std::vector<std::uint64_t> materialize(const SubsetDescriptor& subset, std::uint64_t coin_count);

/// The counting scale. One weigh() call is one weighing: it returns the
/// number of forged coins in the subset, computed directly from the three
/// forged positions (never by materializing the subset), and bumps the
/// query counter by exactly one.
///
/// With cross_check enabled (small pools only), every weigh() additionally
/// materializes the subset and compares the two routes, throwing on any
/// disagreement.
class ScaleOracle {
 public:
  explicit ScaleOracle(ProblemInstance instance, bool cross_check = false);

  WeighOutcome weigh(const SubsetDescriptor& subset);

  const ProblemInstance& instance() const { return instance_; }
  std::uint64_t query_count() const { return query_count_; }

 private:
  ProblemInstance instance_;
  std::uint64_t query_count_ = 0;
  bool cross_check_ = false;
};

/// Anything the search can weigh against. ScaleOracle is the production
/// implementation; tests substitute scripted oracles to drive error paths.
template <class O>
concept WeighingOracle = requires(O& o, const O& co, const SubsetDescriptor& d) {
  { o.weigh(d) } -> std::same_as<WeighOutcome>;
  { co.instance() } -> std::convertible_to<const ProblemInstance&>;
  { co.query_count() } -> std::convertible_to<std::uint64_t>;
};

}  // namespace coinweigh
