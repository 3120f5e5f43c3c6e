#pragma once

#include <array>
#include <optional>

#include "coinweigh/core.hpp"

namespace coinweigh {

/// One row of the shared decode table: a first-round sum, an optional
/// second-round sum, and the three hidden bits they pin down.
struct DecodeRow {
  int first;
  int second;  // -1 when no second round is needed
  std::array<int, 3> bits;
};

/// The 8-row table that resolves three hidden bits from the sum of the bits
/// (first round) plus, when that sum is 1 or 2, the sum of (bit1, 1 - bit2, 0)
/// (second round). The same table decodes the ambiguity weighings of the coin
/// search and the two-stage adder-channel code; both use this instance.
///
///   first | second | bit1 bit2 bit3
///   ------+--------+---------------
///     0   |   -    |  0    0    0
///     3   |   -    |  1    1    1
///     1   |   0    |  0    1    0
///     1   |   1    |  0    0    1
///     1   |   2    |  1    0    0
///     2   |   0    |  0    1    1
///     2   |   1    |  1    1    0
///     2   |   2    |  1    0    1
class DecodeTable {
 public:
  static constexpr std::array<DecodeRow, 8> kRows = {{
      {0, -1, {0, 0, 0}},
      {3, -1, {1, 1, 1}},
      {1, 0, {0, 1, 0}},
      {1, 1, {0, 0, 1}},
      {1, 2, {1, 0, 0}},
      {2, 0, {0, 1, 1}},
      {2, 1, {1, 1, 0}},
      {2, 2, {1, 0, 1}},
  }};

  /// Total on the 8 legal inputs; any other combination throws ContractError.
  static std::array<int, 3> decode(int first, std::optional<int> second);
};

inline std::array<int, 3> decode_row(int first, std::optional<int> second = std::nullopt) {
  return DecodeTable::decode(first, second);
}

}  // namespace coinweigh
