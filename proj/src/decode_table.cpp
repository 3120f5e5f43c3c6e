#include "coinweigh/decode_table.hpp"

#include <string>

namespace coinweigh {

std::array<int, 3> DecodeTable::decode(int first, std::optional<int> second) {
  if (first == 0 || first == 3) {
    if (second.has_value())
      throw ContractError("decode_row: no second outcome is defined for first = " +
                          std::to_string(first));
    return first == 0 ? std::array<int, 3>{0, 0, 0} : std::array<int, 3>{1, 1, 1};
  }
  if (first == 1 || first == 2) {
    if (!second.has_value())
      throw ContractError("decode_row: first = " + std::to_string(first) +
                          " requires a second outcome");
    for (const DecodeRow& row : kRows)
      if (row.first == first && row.second == *second) return row.bits;
    throw ContractError("decode_row: second outcome " + std::to_string(*second) +
                        " out of range");
  }
  throw ContractError("decode_row: first outcome " + std::to_string(first) + " out of range");
}

}  // namespace coinweigh
