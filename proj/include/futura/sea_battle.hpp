#pragma once

// The sea-battle argument: from "X s | X ~s", "[X s] A X s" and
// "[X ~s] A X ~s" infer "A X s | A X ~s".

#include <string>
#include <vector>

#include "futura/model.hpp"
#include "futura/semantics.hpp"
#include "futura/syntax.hpp"

namespace futura::sea_battle {

inline std::vector<Formula> premises() {
  return {parse("X s | X ~s"), parse("[X s] A X s"), parse("[X ~s] A X ~s")};
}

inline Formula conclusion() { return parse("A X s | A X ~s"); }

/// Root w0 with a battle tomorrow on one branch (u1) and none on the other
/// (u2), each continued by one unlabelled node.
inline TreeModel model() {
  ModelDescription d{"w0",
                     2,
                     {{"w0", {}, {"u1", "u2"}},
                      {"u1", {"s"}, {"v1"}},
                      {"u2", {}, {"v2"}},
                      {"v1", {}, {}},
                      {"v2", {}, {}}}};
  return TreeModel::from_description(d);
}

/// The extra probe: does ~X p entail [X p] E ~X p?
inline Formula probe_premise() { return parse("~X p"); }
inline Formula probe_conclusion() { return parse("[X p] E ~X p"); }

struct TruthRow {
  std::vector<std::string> branch;
  std::vector<bool> values;
};

/// Truth of each formula at index on every timeline of m.
inline std::vector<TruthRow> truth_table(const TreeModel& m, const std::vector<Formula>& formulas,
                                         std::size_t index) {
  std::vector<TruthRow> rows;
  for (const auto& t : timelines(m)) {
    TruthRow row{t.ids(m), {}};
    for (const auto& f : formulas)
      row.values.push_back(holds(m, t, index, f));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace futura::sea_battle
