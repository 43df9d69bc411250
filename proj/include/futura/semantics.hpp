#pragma once

// Truth of formulas at (model, timeline, position) and the model-shrinking
// update [psi]. Updates are computed as node masks over the base model so
// nested announcements never copy trees; the public update() materialises
// the restricted model.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "futura/error.hpp"
#include "futura/formula.hpp"
#include "futura/model.hpp"

namespace futura {

/// alive[n] != 0 iff node n belongs to the (restricted) model.
using NodeMask = std::vector<std::uint8_t>;

/// Evaluation engine over a fixed base model. Callers are responsible for
/// the horizon contract; the free functions below check it.
class Evaluator {
public:
  explicit Evaluator(const TreeModel& model) : m_(model), full_(model.size(), 1) {}

  const TreeModel& model() const noexcept { return m_; }
  const NodeMask& full() const noexcept { return full_; }

  bool eval(const NodeMask& alive, std::span<const NodeIndex> branch, std::size_t i, const Formula& f) const {
    switch (f.op()) {
    case Op::Atom:
      return m_.has_atom(branch[i], f.name());
    case Op::Top:
      return true;
    case Op::Not:
      return !eval(alive, branch, i, f.operand());
    case Op::And:
      return eval(alive, branch, i, f.left()) && eval(alive, branch, i, f.right());
    case Op::Next:
      return eval(alive, branch, i + 1, f.operand());
    case Op::All: {
      std::vector<NodeIndex> buf(branch.begin(), branch.end());
      return for_each_path(alive, buf, branch[i], [&](std::span<const NodeIndex> rho) {
        return eval(alive, rho, i, f.operand());
      });
    }
    case Op::Announce: {
      auto updated = update(alive, branch, i, f.announcement());
      if (!updated)
        return true;
      for (std::size_t k = i + 1; k < branch.size(); ++k)
        if (!(*updated)[branch[k]])
          return true;
      return eval(*updated, branch, i, f.body());
    }
    }
    return false;
  }

  bool eval(std::span<const NodeIndex> branch, std::size_t i, const Formula& f) const {
    return eval(full_, branch, i, f);
  }

  /// Update at branch[i] with an A-free formula: nullopt if it is not
  /// achievable, otherwise the surviving nodes. Survival of a node within
  /// sigma steps of w is decided by scanning the timelines through it;
  /// deeper nodes follow their ancestor at distance sigma.
  std::optional<NodeMask> update(const NodeMask& alive, std::span<const NodeIndex> branch, std::size_t i,
                                 const Formula& announced) const {
    const NodeIndex w = branch[i];
    const std::size_t target = i + announced.sigma();
    NodeMask out = alive;
    for (auto c : m_.children(w))
      if (alive[c])
        set_subtree(alive, out, c, 0);

    bool achievable = false;
    std::vector<NodeIndex> buf(branch.begin(), branch.end());
    for_each_prefix(alive, buf, w, target, [&](std::vector<NodeIndex>& rho) {
      complete_branch(alive, rho, target);
      if (eval(alive, rho, i, announced)) {
        achievable = true;
        for (std::size_t k = i + 1; k < target; ++k)
          out[rho[k]] = 1;
        if (target > i)
          set_subtree(alive, out, rho[target], 1);
        else
          out = alive;
      }
      return true;
    });
    if (!achievable)
      return std::nullopt;
    return out;
  }

  /// Any timeline of the masked model through w satisfies f at w.
  bool achievable(const NodeMask& alive, NodeIndex w, const Formula& f) const {
    const std::size_t i = m_.level(w);
    std::vector<NodeIndex> buf = m_.history(w);
    buf.resize(m_.depth() + 1);
    return !for_each_path(alive, buf, w, [&](std::span<const NodeIndex> rho) { return !eval(alive, rho, i, f); });
  }

  /// Visits every descending path of the masked model from n, written into
  /// buf at positions level(n)..depth. Stops early when visit returns false.
  template <typename Visit>
  bool for_each_path(const NodeMask& alive, std::vector<NodeIndex>& buf, NodeIndex n, Visit&& visit) const {
    const std::size_t level = m_.level(n);
    buf[level] = n;
    if (level == m_.depth())
      return visit(std::span<const NodeIndex>(buf));
    for (auto c : m_.children(n))
      if (alive[c] && !for_each_path(alive, buf, c, visit))
        return false;
    return true;
  }

private:
  template <typename Visit>
  bool for_each_prefix(const NodeMask& alive, std::vector<NodeIndex>& buf, NodeIndex n, std::size_t target,
                       Visit&& visit) const {
    const std::size_t level = m_.level(n);
    buf[level] = n;
    if (level == target)
      return visit(buf);
    for (auto c : m_.children(n))
      if (alive[c] && !for_each_prefix(alive, buf, c, target, visit))
        return false;
    return true;
  }

  void complete_branch(const NodeMask& alive, std::vector<NodeIndex>& buf, std::size_t from) const {
    for (std::size_t k = from; k < m_.depth(); ++k) {
      for (auto c : m_.children(buf[k])) {
        if (alive[c]) {
          buf[k + 1] = c;
          break;
        }
      }
    }
  }

  void set_subtree(const NodeMask& alive, NodeMask& out, NodeIndex n, std::uint8_t value) const {
    out[n] = value;
    for (auto c : m_.children(n))
      if (alive[c])
        set_subtree(alive, out, c, value);
  }

  const TreeModel& m_;
  NodeMask full_;
};

namespace detail {

inline void require_horizon(const TreeModel& m, std::size_t position, std::size_t horizon) {
  if (position + horizon > m.depth())
    throw HorizonExceeded("position " + std::to_string(position) + " + horizon " + std::to_string(horizon) +
                          " exceeds model depth " + std::to_string(m.depth()));
}

inline void require_announceable(const Formula& f) {
  if (f.contains_all())
    throw FragmentError("formula contains A and cannot be announced");
}

inline void require_node(const TreeModel& m, NodeIndex w) {
  if (w >= m.size())
    throw UnknownNode("node index " + std::to_string(w) + " is out of range");
}

/// Some timeline of m through w, chosen by following first children.
inline std::vector<NodeIndex> some_branch_through(const TreeModel& m, NodeIndex w) {
  auto branch = m.history(w);
  while (!m.is_leaf(branch.back()))
    branch.push_back(*m.children(branch.back()).begin());
  return branch;
}

} // namespace detail

/// M, pi, i |= f. Refuses (HorizonExceeded) when f could see past the model depth.
inline bool holds(const TreeModel& m, const Timeline& pi, std::size_t i, const Formula& f) {
  if (!pi.is_timeline_of(m))
    throw TimelineMismatch("timeline is not a root-to-leaf branch of the model");
  detail::require_horizon(m, i, f.horizon());
  return Evaluator(m).eval(pi.nodes(), i, f);
}

inline bool achievable(const TreeModel& m, NodeIndex w, const Formula& f) {
  detail::require_announceable(f);
  detail::require_node(m, w);
  detail::require_horizon(m, m.level(w), f.sigma());
  Evaluator e(m);
  return e.achievable(e.full(), w, f);
}

struct UpdateOutcome {
  /// Present iff the announced formula is achievable at the update point.
  std::optional<TreeModel> model;
  /// Ids of the removed nodes, in breadth-first order.
  std::vector<std::string> removed;

  bool defined() const noexcept { return model.has_value(); }
};

/// Surviving-node mask of the update of m at w with f, or nullopt if f is not achievable at w.
inline std::optional<NodeMask> update_mask(const TreeModel& m, NodeIndex w, const Formula& f) {
  detail::require_announceable(f);
  detail::require_node(m, w);
  detail::require_horizon(m, m.level(w), f.sigma());
  Evaluator e(m);
  return e.update(e.full(), detail::some_branch_through(m, w), m.level(w), f);
}

inline UpdateOutcome update(const TreeModel& m, NodeIndex w, const Formula& f) {
  auto mask = update_mask(m, w, f);
  UpdateOutcome outcome;
  if (!mask)
    return outcome;
  for (NodeIndex n = 0; n < m.size(); ++n)
    if (!(*mask)[n])
      outcome.removed.push_back(m.id(n));
  outcome.model = restrict(m, std::span<const std::uint8_t>(*mask));
  return outcome;
}

/// The update at w with f is defined and pi survives it.
inline bool well_given(const TreeModel& m, NodeIndex w, const Formula& f, const Timeline& pi) {
  if (!pi.is_timeline_of(m))
    throw TimelineMismatch("timeline is not a root-to-leaf branch of the model");
  auto mask = update_mask(m, w, f);
  if (!mask)
    return false;
  for (auto n : pi.nodes())
    if (!(*mask)[n])
      return false;
  return true;
}

} // namespace futura
