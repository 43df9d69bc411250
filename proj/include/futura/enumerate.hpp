#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "futura/model.hpp"

namespace futura {

/// Number of ordered uniform-depth trees with branching 1..max_branch and
/// every labelling over num_atoms atoms. Saturates at UINT64_MAX.
inline std::uint64_t model_count(std::size_t num_atoms, std::uint32_t max_branch, std::size_t depth) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  auto mul = [](std::uint64_t a, std::uint64_t b) { return (b != 0 && a > kMax / b) ? kMax : a * b; };
  auto add = [](std::uint64_t a, std::uint64_t b) { return a > kMax - b ? kMax : a + b; };
  const std::uint64_t labels = std::uint64_t{1} << num_atoms;
  std::uint64_t count = labels;
  for (std::size_t level = 0; level < depth; ++level) {
    std::uint64_t forests = 0;
    std::uint64_t power = 1;
    for (std::uint32_t k = 1; k <= max_branch; ++k) {
      power = mul(power, count);
      forests = add(forests, power);
    }
    count = mul(labels, forests);
  }
  return count;
}

/// Breadth-first child-count sequences of every ordered tree of uniform
/// depth with branching 1..max_branch, in lexicographic order.
inline std::vector<std::vector<std::uint32_t>> tree_shapes(std::uint32_t max_branch, std::size_t depth) {
  std::vector<std::vector<std::uint32_t>> shapes;
  std::vector<std::uint32_t> counts;
  auto expand = [&](auto& self, std::size_t level, std::size_t width) -> void {
    if (level == depth) {
      counts.insert(counts.end(), width, 0);
      shapes.push_back(counts);
      counts.resize(counts.size() - width);
      return;
    }
    const std::size_t base = counts.size();
    counts.insert(counts.end(), width, 1);
    while (true) {
      std::size_t next_width = 0;
      for (std::size_t k = base; k < base + width; ++k)
        next_width += counts[k];
      self(self, level + 1, next_width);
      // Odometer over this level, last node fastest.
      std::size_t k = base + width;
      while (k > base && counts[k - 1] == max_branch)
        counts[--k] = 1;
      if (k == base)
        break;
      ++counts[k - 1];
    }
    counts.resize(base);
  };
  expand(expand, 0, 1);
  return shapes;
}

/// Walks every model of a scale exactly once in canonical order: shapes in
/// lexicographic breadth-first order, then labellings as an odometer over the
/// breadth-first nodes (last node fastest).
///
///   ModelEnumerator e({"p"}, 2, 1);
///   do { use(e.current()); } while (e.next());
class ModelEnumerator {
public:
  ModelEnumerator(std::vector<std::string> atoms, std::uint32_t max_branch, std::size_t depth)
      : atoms_(std::move(atoms)), shapes_(tree_shapes(max_branch, depth)), depth_(depth) {
    if (max_branch == 0)
      throw std::invalid_argument("max_branch must be at least 1");
    if (atoms_.size() > 16)
      throw std::invalid_argument("too many atoms to enumerate");
    label_limit_ = std::uint64_t{1} << atoms_.size();
    load_shape();
  }

  const TreeModel& current() const noexcept { return model_; }
  std::uint64_t index() const noexcept { return index_; }

  /// Advances; false once every model has been produced.
  bool next() {
    ++index_;
    for (std::size_t k = labels_.size(); k-- > 0;) {
      if (++labels_[k] < label_limit_) {
        model_.labels_[k] = labels_[k];
        return true;
      }
      labels_[k] = 0;
      model_.labels_[k] = 0;
    }
    if (++shape_ == shapes_.size())
      return false;
    load_shape();
    return true;
  }

  template <typename Visitor>
  static std::uint64_t for_each(std::vector<std::string> atoms, std::uint32_t max_branch, std::size_t depth,
                                Visitor&& visit) {
    ModelEnumerator e(std::move(atoms), max_branch, depth);
    std::uint64_t n = 0;
    do {
      ++n;
      if (!visit(e.current()))
        break;
    } while (e.next());
    return n;
  }

private:
  void load_shape() {
    const auto& counts = shapes_[shape_];
    labels_.assign(counts.size(), 0);
    model_.assign_bfs(depth_, atoms_, counts, labels_, {});
  }

  std::vector<std::string> atoms_;
  std::vector<std::vector<std::uint32_t>> shapes_;
  std::size_t depth_;
  std::size_t shape_ = 0;
  std::uint64_t label_limit_ = 1;
  std::vector<std::uint64_t> labels_;
  std::uint64_t index_ = 0;
  TreeModel model_;
};

/// Materialises the enumeration; only sensible for small scales.
inline std::vector<TreeModel> enumerate_models(const std::vector<std::string>& atoms, std::uint32_t max_branch,
                                               std::size_t depth) {
  std::vector<TreeModel> out;
  ModelEnumerator::for_each(atoms, max_branch, depth, [&](const TreeModel& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

} // namespace futura
