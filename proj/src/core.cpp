#include "coinweigh/core.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace coinweigh {

namespace {

constexpr std::uint64_t kMaxExplicitPool = std::uint64_t{1} << 12;

bool is_pow2(std::uint64_t v) { return v != 0 && std::has_single_bit(v); }

int offset_digit(std::uint64_t offset, std::uint32_t label_len, std::uint32_t digit) {
  return static_cast<int>((offset >> (label_len - digit)) & 1u);
}

bool blocks_overlap(const Block& a, const Block& b) {
  return a.base < b.base + b.size && b.base < a.base + a.size;
}

}  // namespace

ProblemInstance::ProblemInstance(std::uint32_t m, std::array<std::uint64_t, 3> forged)
    : m_(m), forged_(forged) {
  if (m_ < 2) throw std::invalid_argument("ProblemInstance: m must be >= 2");
  if (m_ > 62) throw std::invalid_argument("ProblemInstance: m must be <= 62");
  std::sort(forged_.begin(), forged_.end());
  if (forged_[0] == forged_[1] || forged_[1] == forged_[2])
    throw std::invalid_argument("ProblemInstance: forged coins must be distinct");
  if (forged_[2] >= coin_count())
    throw std::invalid_argument("ProblemInstance: forged coin index out of range");
}

void validate_descriptor(const SubsetDescriptor& subset, std::uint64_t coin_count) {
  struct Validator {
    std::uint64_t t;

    void operator()(const IntervalHalf& d) const {
      const Block& b = d.block;
      if (b.size < 2) throw DescriptorError("IntervalHalf: block size must be >= 2");
      if (!is_pow2(b.size)) throw DescriptorError("IntervalHalf: block size must be a power of 2");
      if (b.base % b.size != 0) throw DescriptorError("IntervalHalf: block not aligned");
      if (b.base + b.size > t) throw DescriptorError("IntervalHalf: block exceeds pool");
    }

    void operator()(const DigitPredicate& d) const {
      if (d.label_len < 1) throw DescriptorError("DigitPredicate: empty labels have no digits");
      if (d.label_len > 62) throw DescriptorError("DigitPredicate: label too long");
      if (d.digit < 1 || d.digit > d.label_len)
        throw DescriptorError("DigitPredicate: digit position out of range");
      const std::uint64_t block_size = std::uint64_t{1} << d.label_len;
      int present = 0;
      for (std::size_t g = 0; g < d.groups.size(); ++g) {
        if (!d.groups[g]) continue;
        ++present;
        const DigitGroup& grp = *d.groups[g];
        if (grp.block.size != block_size)
          throw DescriptorError("DigitPredicate: group block size does not match label length");
        if (grp.block.base + grp.block.size > t)
          throw DescriptorError("DigitPredicate: group block exceeds pool");
        if (grp.required_bit != 0 && grp.required_bit != 1)
          throw DescriptorError("DigitPredicate: required bit must be 0 or 1");
        for (std::size_t h = 0; h < g; ++h)
          if (d.groups[h] && blocks_overlap(grp.block, d.groups[h]->block))
            throw DescriptorError("DigitPredicate: group blocks overlap");
      }
      if (present == 0) throw DescriptorError("DigitPredicate: no groups");
    }

    void operator()(const Explicit& d) const {
      for (std::size_t i = 0; i < d.coins.size(); ++i) {
        if (d.coins[i] >= t) throw DescriptorError("Explicit: coin index out of range");
        for (std::size_t j = 0; j < i; ++j)
          if (d.coins[j] == d.coins[i]) throw DescriptorError("Explicit: duplicate coin index");
      }
    }
  };
  std::visit(Validator{coin_count}, subset);
}

std::vector<std::uint64_t> materialize(const SubsetDescriptor& subset, std::uint64_t coin_count) {
  if (coin_count > kMaxExplicitPool)
    throw SizeError("materialize: pool too large for explicit expansion");
  validate_descriptor(subset, coin_count);

  struct Expander {
    std::vector<std::uint64_t> operator()(const IntervalHalf& d) const {
      Block half = d.selected();
      std::vector<std::uint64_t> out;
      out.reserve(half.size);
      for (std::uint64_t c = half.base; c < half.base + half.size; ++c) out.push_back(c);
      return out;
    }

    std::vector<std::uint64_t> operator()(const DigitPredicate& d) const {
      std::vector<std::uint64_t> out;
      for (const auto& grp : d.groups) {
        if (!grp) continue;
        for (std::uint64_t off = 0; off < grp->block.size; ++off)
          if (offset_digit(off, d.label_len, d.digit) == grp->required_bit)
            out.push_back(grp->block.base + off);
      }
      std::sort(out.begin(), out.end());
      return out;
    }

    std::vector<std::uint64_t> operator()(const Explicit& d) const {
      std::vector<std::uint64_t> out = d.coins;
      std::sort(out.begin(), out.end());
      return out;
    }
  };
  return std::visit(Expander{}, subset);
}

ScaleOracle::ScaleOracle(ProblemInstance instance, bool cross_check)
    : instance_(std::move(instance)), cross_check_(cross_check) {
  if (cross_check_ && instance_.coin_count() > kMaxExplicitPool)
    throw SizeError("ScaleOracle: cross-check mode requires coin_count <= 2^12");
}

WeighOutcome ScaleOracle::weigh(const SubsetDescriptor& subset) {
  validate_descriptor(subset, instance_.coin_count());

  struct Counter {
    const ProblemInstance& inst;

    int operator()(const IntervalHalf& d) const {
      Block half = d.selected();
      int n = 0;
      for (std::uint64_t coin : inst.forged())
        if (half.contains(coin)) ++n;
      return n;
    }

    int operator()(const DigitPredicate& d) const {
      int n = 0;
      for (std::uint64_t coin : inst.forged()) {
        for (const auto& grp : d.groups) {
          if (!grp || !grp->block.contains(coin)) continue;
          if (offset_digit(coin - grp->block.base, d.label_len, d.digit) == grp->required_bit) ++n;
          break;  // groups are disjoint
        }
      }
      return n;
    }

    int operator()(const Explicit& d) const {
      int n = 0;
      for (std::uint64_t coin : d.coins)
        if (inst.is_forged(coin)) ++n;
      return n;
    }
  };
  int symbolic = std::visit(Counter{instance_}, subset);

  if (cross_check_) {
    int explicit_count = 0;
    for (std::uint64_t coin : materialize(subset, instance_.coin_count()))
      if (instance_.is_forged(coin)) ++explicit_count;
    if (explicit_count != symbolic)
      throw std::logic_error("ScaleOracle: symbolic weight " + std::to_string(symbolic) +
                             " != explicit weight " + std::to_string(explicit_count));
  }

  ++query_count_;
  return WeighOutcome{symbolic};
}

}  // namespace coinweigh
