#pragma once

// Finite prefixes of serial trees. A TreeModel of depth D has every leaf at
// distance exactly D from the root and stands for any serial tree that
// extends it; formulas are only evaluated where they cannot see past D.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <ranges>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "futura/error.hpp"
#include "futura/formula.hpp"

namespace futura {

using NodeIndex = std::uint32_t;
inline constexpr NodeIndex kNoNode = static_cast<NodeIndex>(-1);

/// Plain, unchecked description of a model, in the shape of the model file.
struct ModelDescription {
  struct NodeSpec {
    std::string id;
    std::vector<std::string> atoms;
    std::vector<std::string> children;
  };

  std::string root;
  std::size_t depth = 0;
  std::vector<NodeSpec> nodes;
};

/// Checks every tree-model invariant; an empty result means the description is a model.
inline std::vector<std::string> validate(const ModelDescription& d) {
  std::vector<std::string> violations;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    if (!index.emplace(d.nodes[k].id, k).second)
      violations.push_back("duplicate node '" + d.nodes[k].id + "'");
    for (const auto& a : d.nodes[k].atoms)
      if (!detail::is_identifier(a))
        violations.push_back("node '" + d.nodes[k].id + "' has invalid atom '" + a + "'");
  }
  auto root = index.find(d.root);
  if (root == index.end()) {
    violations.push_back("root '" + d.root + "' is not a node");
    return violations;
  }

  std::vector<std::size_t> parents(d.nodes.size(), 0);
  for (const auto& n : d.nodes) {
    for (const auto& c : n.children) {
      auto it = index.find(c);
      if (it == index.end()) {
        violations.push_back("node '" + n.id + "' has unknown child '" + c + "'");
        continue;
      }
      if (++parents[it->second] == 2)
        violations.push_back("node '" + c + "' has more than one parent");
    }
  }
  if (parents[root->second] != 0)
    violations.push_back("root '" + d.root + "' has a parent");

  std::vector<std::optional<std::size_t>> level(d.nodes.size());
  std::vector<std::size_t> frontier{root->second};
  level[root->second] = 0;
  bool ragged = false;
  while (!frontier.empty()) {
    std::vector<std::size_t> following;
    for (auto k : frontier) {
      const auto& n = d.nodes[k];
      const std::size_t here = *level[k];
      if (n.children.empty() && here != d.depth)
        ragged = true;
      if (here == d.depth && !n.children.empty()) {
        violations.push_back("node '" + n.id + "' extends below depth " + std::to_string(d.depth));
        continue;
      }
      for (const auto& c : n.children) {
        auto it = index.find(c);
        if (it == index.end() || level[it->second])
          continue;
        level[it->second] = here + 1;
        following.push_back(it->second);
      }
    }
    frontier = std::move(following);
  }
  if (ragged)
    violations.push_back("non-uniform leaf depth");
  for (std::size_t k = 0; k < d.nodes.size(); ++k)
    if (!level[k])
      violations.push_back("unreachable node '" + d.nodes[k].id + "'");
  return violations;
}

class ModelEnumerator;

/// Validated tree model. Nodes are stored in breadth-first order, so the
/// children of a node occupy a contiguous index range and the root is node 0.
class TreeModel {
public:
  /// Builds from a shape given as breadth-first child counts (leaves count 0).
  /// Labels are bitmasks over the vocabulary. Empty ids are replaced by n0, n1, ...
  static TreeModel from_bfs(std::size_t depth, std::vector<std::string> vocabulary,
                            std::span<const std::uint32_t> child_counts,
                            std::span<const std::uint64_t> labels, std::vector<std::string> ids = {}) {
    TreeModel m;
    m.assign_bfs(depth, std::move(vocabulary), child_counts, labels, std::move(ids));
    return m;
  }

  /// Throws ModelError listing every violated invariant.
  static TreeModel from_description(const ModelDescription& d) {
    if (auto violations = validate(d); !violations.empty())
      throw ModelError(std::move(violations));
    std::unordered_map<std::string_view, const ModelDescription::NodeSpec*> by_id;
    std::set<std::string> vocabulary;
    for (const auto& n : d.nodes) {
      by_id.emplace(n.id, &n);
      vocabulary.insert(n.atoms.begin(), n.atoms.end());
    }
    std::vector<std::string> vocab(vocabulary.begin(), vocabulary.end());
    if (vocab.size() > 64)
      throw ModelError({"more than 64 distinct atoms"});

    std::vector<const ModelDescription::NodeSpec*> order{by_id.at(d.root)};
    for (std::size_t k = 0; k < order.size(); ++k)
      for (const auto& c : order[k]->children)
        order.push_back(by_id.at(c));

    std::vector<std::uint32_t> counts;
    std::vector<std::uint64_t> labels;
    std::vector<std::string> ids;
    for (const auto* n : order) {
      counts.push_back(static_cast<std::uint32_t>(n->children.size()));
      std::uint64_t mask = 0;
      for (const auto& a : n->atoms)
        mask |= std::uint64_t{1} << (std::lower_bound(vocab.begin(), vocab.end(), a) - vocab.begin());
      labels.push_back(mask);
      ids.push_back(n->id);
    }
    return from_bfs(d.depth, std::move(vocab), counts, labels, std::move(ids));
  }

  ModelDescription describe() const {
    ModelDescription d;
    d.root = id(root());
    d.depth = depth_;
    for (NodeIndex n = 0; n < size(); ++n) {
      ModelDescription::NodeSpec spec;
      spec.id = id(n);
      spec.atoms = atoms(n);
      for (auto c : children(n))
        spec.children.push_back(id(c));
      d.nodes.push_back(std::move(spec));
    }
    return d;
  }

  static constexpr NodeIndex root() noexcept { return 0; }
  std::size_t size() const noexcept { return parent_.size(); }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t level(NodeIndex n) const { return level_.at(n); }
  NodeIndex parent(NodeIndex n) const { return parent_.at(n); }
  std::size_t child_count(NodeIndex n) const { return child_count_.at(n); }
  bool is_leaf(NodeIndex n) const { return child_count_.at(n) == 0; }

  std::ranges::iota_view<NodeIndex, NodeIndex> children(NodeIndex n) const {
    return std::views::iota(first_child_.at(n), first_child_[n] + child_count_[n]);
  }

  const std::string& id(NodeIndex n) const { return ids_.at(n); }

  std::optional<NodeIndex> find(std::string_view id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end())
      return std::nullopt;
    return static_cast<NodeIndex>(it - ids_.begin());
  }

  NodeIndex node(std::string_view id) const {
    if (auto n = find(id))
      return *n;
    throw UnknownNode("unknown node '" + std::string(id) + "'");
  }

  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }
  std::uint64_t label(NodeIndex n) const { return labels_.at(n); }

  bool has_atom(NodeIndex n, std::string_view name) const {
    for (std::size_t k = 0; k < vocab_.size(); ++k)
      if (vocab_[k] == name)
        return (labels_[n] >> k) & 1U;
    return false;
  }

  std::vector<std::string> atoms(NodeIndex n) const {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < vocab_.size(); ++k)
      if ((labels_.at(n) >> k) & 1U)
        out.push_back(vocab_[k]);
    return out;
  }

  /// Root-to-node sequence.
  std::vector<NodeIndex> history(NodeIndex n) const {
    std::vector<NodeIndex> h(level(n) + 1);
    for (auto k = h.size(); k-- > 0; n = parent_[n])
      h[k] = n;
    return h;
  }

  /// True if x lies strictly below w.
  bool is_future_of(NodeIndex x, NodeIndex w) const {
    if (level(x) <= level(w))
      return false;
    while (level_[x] > level_[w])
      x = parent_[x];
    return x == w;
  }

  /// Same shape, ids and atom names node for node.
  friend bool operator==(const TreeModel& a, const TreeModel& b) {
    if (a.depth_ != b.depth_ || a.size() != b.size())
      return false;
    for (NodeIndex n = 0; n < a.size(); ++n)
      if (a.ids_[n] != b.ids_[n] || a.child_count_[n] != b.child_count_[n] || a.atoms(n) != b.atoms(n))
        return false;
    return true;
  }

private:
  friend class ModelEnumerator;
  TreeModel() = default;

  void assign_bfs(std::size_t depth, std::vector<std::string> vocabulary,
                  std::span<const std::uint32_t> child_counts, std::span<const std::uint64_t> labels,
                  std::vector<std::string> ids) {
    const std::size_t n = child_counts.size();
    if (n == 0 || labels.size() != n || (!ids.empty() && ids.size() != n))
      throw std::invalid_argument("inconsistent breadth-first model shape");
    depth_ = depth;
    vocab_ = std::move(vocabulary);
    child_count_.assign(child_counts.begin(), child_counts.end());
    labels_.assign(labels.begin(), labels.end());
    first_child_.resize(n);
    parent_.assign(n, kNoNode);
    level_.assign(n, 0);
    NodeIndex next_free = 1;
    for (NodeIndex k = 0; k < n; ++k) {
      if (k > 0 && parent_[k] == kNoNode)
        throw std::invalid_argument("breadth-first shape is not connected");
      first_child_[k] = next_free;
      for (std::uint32_t c = 0; c < child_count_[k]; ++c, ++next_free) {
        if (next_free >= n)
          throw std::invalid_argument("breadth-first shape overflows its node count");
        parent_[next_free] = k;
        level_[next_free] = level_[k] + 1;
      }
      if ((child_count_[k] == 0) != (level_[k] == depth))
        throw std::invalid_argument("breadth-first shape is not of uniform depth");
    }
    if (next_free != n)
      throw std::invalid_argument("breadth-first shape has unused nodes");
    if (ids.empty()) {
      ids_.resize(n);
      for (NodeIndex k = 0; k < n; ++k)
        ids_[k] = "n" + std::to_string(k);
    } else {
      ids_ = std::move(ids);
    }
  }

  std::size_t depth_ = 0;
  std::vector<std::string> vocab_;
  std::vector<std::uint32_t> child_count_;
  std::vector<NodeIndex> first_child_;
  std::vector<NodeIndex> parent_;
  std::vector<std::uint32_t> level_;
  std::vector<std::uint64_t> labels_;
  std::vector<std::string> ids_;
};

inline std::vector<std::string> validate(const TreeModel& m) { return validate(m.describe()); }

// ---------------------------------------------------------------------------
// Timelines

/// A root-to-leaf branch: position i holds the node at distance i from the root.
class Timeline {
public:
  explicit Timeline(std::vector<NodeIndex> nodes) : nodes_(std::move(nodes)) {}

  /// Resolves node ids against m and checks the branch is a timeline of m.
  static Timeline from_ids(const TreeModel& m, std::span<const std::string> ids) {
    std::vector<NodeIndex> nodes;
    for (const auto& id : ids) {
      auto n = m.find(id);
      if (!n)
        throw TimelineMismatch("node '" + id + "' is not in the model");
      nodes.push_back(*n);
    }
    Timeline t(std::move(nodes));
    if (!t.is_timeline_of(m))
      throw TimelineMismatch("not a root-to-leaf branch of the model");
    return t;
  }

  /// History ⊗ path: the history must end where the path starts.
  static Timeline splice(std::span<const NodeIndex> history, std::span<const NodeIndex> path) {
    if (history.empty() || path.empty() || history.back() != path.front())
      throw TimelineMismatch("history and path do not meet");
    std::vector<NodeIndex> nodes(history.begin(), history.end());
    nodes.insert(nodes.end(), path.begin() + 1, path.end());
    return Timeline(std::move(nodes));
  }

  NodeIndex at(std::size_t i) const { return nodes_.at(i); }
  std::size_t length() const noexcept { return nodes_.size(); }
  std::span<const NodeIndex> nodes() const noexcept { return nodes_; }

  /// Prefix up to and including position i.
  std::span<const NodeIndex> prefix(std::size_t i) const { return std::span(nodes_).first(i + 1); }
  /// Suffix from position i on.
  std::span<const NodeIndex> suffix(std::size_t i) const { return std::span(nodes_).subspan(i); }

  bool passes_through(NodeIndex n) const { return std::find(nodes_.begin(), nodes_.end(), n) != nodes_.end(); }

  bool is_timeline_of(const TreeModel& m) const {
    if (nodes_.size() != m.depth() + 1 || nodes_[0] != TreeModel::root())
      return false;
    for (std::size_t k = 1; k < nodes_.size(); ++k)
      if (nodes_[k] >= m.size() || m.parent(nodes_[k]) != nodes_[k - 1])
        return false;
    return true;
  }

  std::vector<std::string> ids(const TreeModel& m) const {
    std::vector<std::string> out;
    for (auto n : nodes_)
      out.push_back(m.id(n));
    return out;
  }

  friend bool operator==(const Timeline&, const Timeline&) = default;

private:
  std::vector<NodeIndex> nodes_;
};

namespace detail {

inline void collect_paths(const TreeModel& m, NodeIndex n, std::vector<NodeIndex>& path,
                          std::vector<std::vector<NodeIndex>>& out) {
  path.push_back(n);
  if (m.is_leaf(n))
    out.push_back(path);
  for (auto c : m.children(n))
    collect_paths(m, c, path, out);
  path.pop_back();
}

} // namespace detail

/// Descending node-to-leaf sequences starting at n.
inline std::vector<std::vector<NodeIndex>> paths_from(const TreeModel& m, NodeIndex n) {
  if (n >= m.size())
    throw UnknownNode("node index " + std::to_string(n) + " is out of range");
  std::vector<std::vector<NodeIndex>> out;
  std::vector<NodeIndex> path;
  detail::collect_paths(m, n, path, out);
  return out;
}

inline std::vector<std::vector<NodeIndex>> paths_from(const TreeModel& m, std::string_view id) {
  return paths_from(m, m.node(id));
}

/// Timelines passing through (or starting at) w.
inline std::vector<Timeline> timelines_through(const TreeModel& m, NodeIndex w) {
  const auto history = m.history(w);
  std::vector<Timeline> out;
  for (const auto& p : paths_from(m, w))
    out.push_back(Timeline::splice(history, p));
  return out;
}

inline std::vector<Timeline> timelines(const TreeModel& m) { return timelines_through(m, TreeModel::root()); }

// ---------------------------------------------------------------------------
// Construction helpers

/// Keeps the nodes n with keep[n] != 0. The root must be kept, the removed
/// nodes must be closed under children and every kept inner node must keep a child.
inline TreeModel restrict(const TreeModel& m, std::span<const std::uint8_t> keep) {
  if (keep.size() != m.size())
    throw RestrictionError("restriction mask does not match the model size");
  if (!keep[TreeModel::root()])
    throw RestrictionError("restriction must keep the root");
  std::vector<std::uint32_t> counts;
  std::vector<std::uint64_t> labels;
  std::vector<std::string> ids;
  for (NodeIndex n = 0; n < m.size(); ++n) {
    std::uint32_t kept = 0;
    for (auto c : m.children(n)) {
      if (!keep[c])
        continue;
      if (!keep[n])
        throw RestrictionError("removed node '" + m.id(n) + "' has kept child '" + m.id(c) + "'");
      ++kept;
    }
    if (!keep[n])
      continue;
    if (kept == 0 && !m.is_leaf(n))
      throw RestrictionError("restriction is not a model: node '" + m.id(n) + "' loses every child");
    counts.push_back(kept);
    labels.push_back(m.label(n));
    ids.push_back(m.id(n));
  }
  // Filtering a breadth-first order keeps it breadth-first.
  return TreeModel::from_bfs(m.depth(), m.vocabulary(), counts, labels, std::move(ids));
}

/// Keeps exactly the nodes in keep, by id.
inline TreeModel restrict(const TreeModel& m, const std::set<std::string>& keep) {
  std::vector<std::uint8_t> mask(m.size(), 0);
  for (const auto& id : keep) {
    auto n = m.find(id);
    if (!n)
      throw RestrictionError("restriction keeps unknown node '" + id + "'");
    mask[*n] = 1;
  }
  return restrict(m, std::span<const std::uint8_t>(mask));
}

/// Grows m by `extra` levels below its leaves with seeded random shapes
/// (1 or 2 children) and labels over m's vocabulary. Existing nodes keep
/// their ids, labels and indices.
inline TreeModel extend_random(const TreeModel& m, std::size_t extra, std::uint64_t seed,
                               std::uint32_t max_branch = 2) {
  if (extra == 0)
    return m;
  std::mt19937_64 rng(seed);
  auto draw = [&](std::uint64_t bound) { return rng() % bound; };
  const std::uint64_t label_space = std::uint64_t{1} << m.vocabulary().size();
  const std::size_t depth = m.depth() + extra;

  std::vector<std::uint32_t> counts;
  std::vector<std::uint64_t> labels;
  std::vector<std::string> ids;
  std::vector<std::size_t> level;
  std::unordered_set<std::string> used;
  for (NodeIndex n = 0; n < m.size(); ++n) {
    counts.push_back(static_cast<std::uint32_t>(m.child_count(n)));
    labels.push_back(m.label(n));
    ids.push_back(m.id(n));
    level.push_back(m.level(n));
    used.insert(m.id(n));
  }
  // Breadth-first order puts all new nodes after the old ones.
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] != 0 || level[k] == depth)
      continue;
    counts[k] = 1 + static_cast<std::uint32_t>(draw(max_branch));
    for (std::uint32_t c = 0; c < counts[k]; ++c) {
      std::string id = ids[k] + "." + std::to_string(c);
      while (!used.insert(id).second)
        id += "'";
      ids.push_back(std::move(id));
      labels.push_back(label_space > 1 ? draw(label_space) : 0);
      level.push_back(level[k] + 1);
      counts.push_back(0);
    }
  }
  return TreeModel::from_bfs(depth, m.vocabulary(), counts, labels, std::move(ids));
}

/// Seeded random model of the given depth.
inline TreeModel random_model(std::vector<std::string> vocabulary, std::uint32_t max_branch, std::size_t depth,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
  const std::uint64_t label_space = std::uint64_t{1} << vocabulary.size();
  const std::uint32_t count = 0;
  const std::uint64_t label = label_space > 1 ? rng() % label_space : 0;
  auto root = TreeModel::from_bfs(0, std::move(vocabulary), std::span(&count, 1), std::span(&label, 1));
  return extend_random(root, depth, seed, max_branch);
}

/// Finite serial transition graph, unfolded into a tree model.
struct KripkeSpec {
  std::string initial;
  std::map<std::string, std::vector<std::string>> successors;
  std::map<std::string, std::vector<std::string>> atoms;
};

inline TreeModel unfold(const KripkeSpec& k, std::size_t depth) {
  std::set<std::string> states;
  for (const auto& [s, next] : k.successors) {
    states.insert(s);
    states.insert(next.begin(), next.end());
  }
  for (const auto& [s, labels] : k.atoms)
    states.insert(s);
  states.insert(k.initial);
  for (const auto& s : states) {
    auto it = k.successors.find(s);
    if (it == k.successors.end() || it->second.empty())
      throw SerialityError("state '" + s + "' has no successor");
  }
  std::set<std::string> vocabulary;
  for (const auto& [s, labels] : k.atoms)
    vocabulary.insert(labels.begin(), labels.end());
  std::vector<std::string> vocab(vocabulary.begin(), vocabulary.end());
  auto label_of = [&](const std::string& s) {
    std::uint64_t mask = 0;
    if (auto it = k.atoms.find(s); it != k.atoms.end())
      for (const auto& a : it->second)
        mask |= std::uint64_t{1} << (std::lower_bound(vocab.begin(), vocab.end(), a) - vocab.begin());
    return mask;
  };

  std::vector<std::string> frontier{k.initial};
  std::vector<std::uint32_t> counts;
  std::vector<std::uint64_t> labels;
  for (std::size_t level = 0; level <= depth; ++level) {
    std::vector<std::string> following;
    for (const auto& s : frontier) {
      labels.push_back(label_of(s));
      if (level == depth) {
        counts.push_back(0);
        continue;
      }
      const auto& next = k.successors.at(s);
      counts.push_back(static_cast<std::uint32_t>(next.size()));
      following.insert(following.end(), next.begin(), next.end());
    }
    frontier = std::move(following);
  }
  return TreeModel::from_bfs(depth, std::move(vocab), counts, labels);
}

} // namespace futura
