#include "coinweigh/search.hpp"

namespace coinweigh {

// Trace and descriptor JSON schemas are pinned; see MANUAL.md before
// changing any field name or order.

nlohmann::ordered_json to_json(const SubsetDescriptor& subset) {
  using json = nlohmann::ordered_json;
  struct Emitter {
    json operator()(const IntervalHalf& d) const {
      return json{{"type", "interval_half"},
                  {"base", d.block.base},
                  {"len", d.block.size},
                  {"half", d.half == Half::lower ? "lower" : "upper"}};
    }
    json operator()(const DigitPredicate& d) const {
      static constexpr const char* kGroupNames[3] = {"T1", "T2", "T3"};
      json groups = json::array();
      for (std::size_t g = 0; g < d.groups.size(); ++g) {
        if (!d.groups[g]) continue;
        groups.push_back(json{{"group", kGroupNames[g]},
                              {"base", d.groups[g]->block.base},
                              {"bit", d.groups[g]->required_bit}});
      }
      return json{{"type", "digit_predicate"},
                  {"digit", d.digit},
                  {"label_len", d.label_len},
                  {"groups", std::move(groups)}};
    }
    json operator()(const Explicit& d) const {
      return json{{"type", "explicit"}, {"coins", d.coins}};
    }
  };
  return std::visit(Emitter{}, subset);
}

nlohmann::ordered_json to_json(const SearchTrace& trace) {
  using json = nlohmann::ordered_json;
  json weighings = json::array();
  for (const TraceEntry& entry : trace.weighings)
    weighings.push_back(json{{"descriptor", to_json(entry.subset)}, {"outcome", entry.outcome.value}});
  return json{{"m", trace.m},
              {"forged", trace.forged},
              {"l1", trace.l1},
              {"l2", trace.l2},
              {"l3", trace.l3},
              {"total", trace.total},
              {"weighings", std::move(weighings)},
              {"recovered", trace.recovered}};
}

}  // namespace coinweigh
