#pragma once

// Shared test helpers, including a slow reference evaluator that follows the
// semantic clauses literally: updates are materialised with restrict() and
// survival is decided by scanning the timelines through each node.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "futura/futura.hpp"

namespace testing_support {

using namespace futura;

inline std::string data_path(const std::string& name) { return std::string(FUTURA_DATA_DIR) + "/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(FUTURA_GOLDEN_DIR) + "/" + name; }

inline TreeModel four_timelines() { return load_model(data_path("four_timelines.json")); }
inline TreeModel sea() { return load_model(data_path("sea.json")); }

inline Timeline branch(const TreeModel& m, std::vector<std::string> ids) { return Timeline::from_ids(m, ids); }

namespace ref {

// sigma by its recursion: atoms and T see 0 steps, X adds one, the rest take the max.
inline std::size_t sigma(const Formula& f) {
  switch (f.op()) {
  case Op::Atom:
  case Op::Top:
    return 0;
  case Op::Not:
    return sigma(f.operand());
  case Op::Next:
    return sigma(f.operand()) + 1;
  case Op::And:
    return std::max(sigma(f.left()), sigma(f.right()));
  case Op::Announce:
    return std::max(sigma(f.announcement()), sigma(f.body()));
  case Op::All:
    break;
  }
  throw FragmentError("sigma undefined on A");
}

inline bool holds(const TreeModel& m, const std::vector<std::string>& ids, std::size_t i, const Formula& f);

/// Removed node ids, or nullopt when f is not achievable at w.
inline std::optional<std::set<std::string>> removed(const TreeModel& m, const std::string& w, const Formula& f) {
  const NodeIndex wn = m.node(w);
  const std::size_t level = m.level(wn);
  const std::size_t reach = sigma(f);
  std::vector<std::vector<std::string>> good;
  for (const auto& t : timelines_through(m, wn)) {
    auto ids = t.ids(m);
    if (holds(m, ids, level, f))
      good.push_back(ids);
  }
  if (good.empty())
    return std::nullopt;
  std::set<std::string> out;
  for (NodeIndex x = 0; x < m.size(); ++x) {
    if (!m.is_future_of(x, wn) || x == wn)
      continue;
    NodeIndex probe = x;
    while (m.level(probe) > level + reach)
      probe = m.parent(probe);
    if (probe == wn)
      continue;
    bool kept = false;
    for (const auto& ids : good)
      kept = kept || ids[m.level(probe)] == m.id(probe);
    if (!kept)
      out.insert(m.id(x));
  }
  return out;
}

inline bool holds(const TreeModel& m, const std::vector<std::string>& ids, std::size_t i, const Formula& f) {
  switch (f.op()) {
  case Op::Atom:
    return m.has_atom(m.node(ids[i]), f.name());
  case Op::Top:
    return true;
  case Op::Not:
    return !holds(m, ids, i, f.operand());
  case Op::And:
    return holds(m, ids, i, f.left()) && holds(m, ids, i, f.right());
  case Op::Next:
    return holds(m, ids, i + 1, f.operand());
  case Op::All:
    for (const auto& path : paths_from(m, ids[i])) {
      std::vector<std::string> spliced(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(i));
      for (auto n : path)
        spliced.push_back(m.id(n));
      if (!holds(m, spliced, i, f.operand()))
        return false;
    }
    return true;
  case Op::Announce: {
    auto gone = removed(m, ids[i], f.announcement());
    if (!gone)
      return true;
    for (const auto& id : ids)
      if (gone->contains(id))
        return true;
    std::set<std::string> keep;
    for (NodeIndex n = 0; n < m.size(); ++n)
      if (!gone->contains(m.id(n)))
        keep.insert(m.id(n));
    return holds(restrict(m, keep), ids, i, f.body());
  }
  }
  return false;
}

} // namespace ref

/// Every (timeline, index) admissible for horizon h in m.
template <typename Visit>
void for_each_point(const TreeModel& m, std::size_t horizon, Visit&& visit) {
  for (const auto& t : timelines(m))
    for (std::size_t i = 0; i + horizon <= m.depth(); ++i)
      visit(t, i);
}

} // namespace testing_support
