#pragma once

// Bounded validity, entailment and equivalence checking.
//
// Two enumeration strategies are available:
//
//  - Exhaustive walks every ordered model of the scale, every timeline and
//    every admissible index.
//  - Window (the default) uses that truth at (M, pi, i) only depends on the
//    subtree rooted at pi(i) cut at the formulas' horizon h. It enumerates
//    depth-h trees up to sibling permutation, varies only the labels a
//    formula can read at each level, and checks every timeline at i = 0.
//    Every window is the subtree of some depth-D model of the scale, so both
//    strategies find a counterexample in exactly the same cases.
//
// A counterexample is always padded back to the requested depth and
// re-evaluated with holds() before it is returned.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "futura/enumerate.hpp"
#include "futura/error.hpp"
#include "futura/formula.hpp"
#include "futura/model.hpp"
#include "futura/semantics.hpp"

namespace futura {

enum class Strategy { Window, Exhaustive };

inline std::string to_string(Strategy s) { return s == Strategy::Window ? "window" : "exhaustive"; }

struct Scale {
  std::vector<std::string> atoms;
  std::uint32_t max_branch = 2;
  std::size_t depth = 1;
  Strategy strategy = Strategy::Window;

  /// Atoms of the formulas (first two in order), branching 2, depth one
  /// past the largest horizon.
  static Scale defaults_for(std::span<const Formula> formulas) {
    std::set<std::string> names;
    std::size_t horizon = 0;
    for (const auto& f : formulas) {
      collect_atoms(f, names);
      horizon = std::max(horizon, f.horizon());
    }
    Scale s;
    for (const auto& n : names) {
      if (s.atoms.size() == 2)
        break;
      s.atoms.push_back(n);
    }
    s.depth = horizon + 1;
    return s;
  }

  static Scale defaults_for(std::initializer_list<Formula> formulas) {
    return defaults_for(std::span<const Formula>(formulas.begin(), formulas.size()));
  }

  friend bool operator==(const Scale&, const Scale&) = default;
};

inline std::string to_string(const Scale& s) {
  std::string atoms;
  for (const auto& a : s.atoms)
    atoms += (atoms.empty() ? "" : ",") + a;
  return "atoms {" + atoms + "}, branch <= " + std::to_string(s.max_branch) + ", depth " + std::to_string(s.depth) +
         ", " + to_string(s.strategy) + " enumeration";
}

struct Counterexample {
  TreeModel model;
  Timeline timeline;
  std::size_t index = 0;
};

/// Outcome of a bounded check. Without a counterexample the only claim is
/// that none exists among the models of the scale.
struct Verdict {
  Scale scale;
  /// Models evaluated: full models for exhaustive search, windows otherwise.
  std::uint64_t models_checked = 0;
  std::optional<Counterexample> counterexample;

  bool no_counterexample_at_scale() const noexcept { return !counterexample.has_value(); }
};

/// Pads every leaf of m with unlabelled single-child chains down to depth
/// and re-expresses labels over vocabulary; pi is extended along the padding.
inline std::pair<TreeModel, Timeline> embed(const TreeModel& m, const Timeline& pi, std::size_t depth,
                                            const std::vector<std::string>& vocabulary) {
  if (depth < m.depth())
    throw ScaleError("cannot embed a depth-" + std::to_string(m.depth()) + " model at depth " + std::to_string(depth));
  std::vector<std::uint32_t> counts;
  std::vector<std::uint64_t> labels;
  std::vector<std::string> ids;
  std::size_t leaves = 0;
  for (NodeIndex n = 0; n < m.size(); ++n) {
    counts.push_back(m.is_leaf(n) && depth > m.depth() ? 1 : m.child_count(n));
    std::uint64_t label = 0;
    for (std::size_t k = 0; k < vocabulary.size(); ++k)
      if (m.has_atom(n, vocabulary[k]))
        label |= std::uint64_t{1} << k;
    for (const auto& a : m.atoms(n))
      if (std::find(vocabulary.begin(), vocabulary.end(), a) == vocabulary.end())
        throw ScaleError("vocabulary lacks atom '" + a + "' used by the model");
    labels.push_back(label);
    ids.push_back(m.id(n));
    leaves += m.is_leaf(n);
  }
  std::set<std::string> taken(ids.begin(), ids.end());
  for (std::size_t level = m.depth() + 1; level <= depth; ++level) {
    for (std::size_t k = 0; k < leaves; ++k) {
      counts.push_back(level < depth ? 1 : 0);
      labels.push_back(0);
      std::string id = "pad" + std::to_string(ids.size());
      while (taken.contains(id))
        id += "_";
      taken.insert(id);
      ids.push_back(std::move(id));
    }
  }
  TreeModel out = TreeModel::from_bfs(depth, vocabulary, counts, labels, std::move(ids));
  std::vector<NodeIndex> branch(pi.nodes().begin(), pi.nodes().end());
  while (!out.is_leaf(branch.back()))
    branch.push_back(*out.children(branch.back()).begin());
  return {std::move(out), Timeline(std::move(branch))};
}

namespace detail {

// Bits (over vocabulary) of the atoms f can read at each level below the
// evaluation point.
inline void readable_labels(const Formula& f, std::size_t offset, const std::vector<std::string>& vocabulary,
                            std::vector<std::uint64_t>& out) {
  switch (f.op()) {
  case Op::Atom:
    for (std::size_t k = 0; k < vocabulary.size(); ++k)
      if (vocabulary[k] == f.name() && offset < out.size())
        out[offset] |= std::uint64_t{1} << k;
    return;
  case Op::Top:
    return;
  case Op::Not:
  case Op::All:
    readable_labels(f.operand(), offset, vocabulary, out);
    return;
  case Op::Next:
    readable_labels(f.operand(), offset + 1, vocabulary, out);
    return;
  case Op::And:
    readable_labels(f.left(), offset, vocabulary, out);
    readable_labels(f.right(), offset, vocabulary, out);
    return;
  case Op::Announce:
    readable_labels(f.announcement(), offset, vocabulary, out);
    readable_labels(f.body(), offset, vocabulary, out);
    return;
  }
}

inline std::vector<std::uint64_t> submasks(std::uint64_t mask) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0;; s = (s - mask) & mask) {
    out.push_back(s);
    if (s == mask)
      break;
  }
  return out;
}

// Trees of uniform height up to sibling permutation. pieces[l] lists the
// distinct subtrees whose root sits at level l; a piece's children are
// non-decreasing indices into pieces[l + 1].
class WindowEnumerator {
public:
  WindowEnumerator(std::vector<std::uint64_t> readable, std::uint32_t max_branch)
      : readable_(std::move(readable)), branch_(max_branch), pieces_(readable_.size()) {
    const std::size_t h = readable_.size() - 1;
    for (auto label : submasks(readable_[h]))
      pieces_[h].push_back({label, {}});
    // The root level is streamed instead of stored.
    for (std::size_t l = h; l-- > 1;) {
      for_each_piece(l, [&](std::uint64_t label, const std::vector<std::uint32_t>& kids) {
        pieces_[l].push_back({label, kids});
        return true;
      });
    }
  }

  /// visit(child_counts, labels) for each window in canonical order; stops when visit returns false.
  template <typename Visit>
  void for_each(Visit&& visit) {
    if (readable_.size() == 1) {
      for (auto label : submasks(readable_[0])) {
        counts_.assign(1, 0);
        labels_.assign(1, label);
        if (!visit(counts_, labels_))
          return;
      }
      return;
    }
    for_each_piece(0, [&](std::uint64_t label, const std::vector<std::uint32_t>& kids) {
      materialise(label, kids);
      return visit(counts_, labels_);
    });
  }

private:
  struct Piece {
    std::uint64_t label;
    std::vector<std::uint32_t> children;
  };

  template <typename Emit>
  bool for_each_piece(std::size_t level, Emit&& emit) {
    const auto labels = submasks(readable_[level]);
    const auto below = static_cast<std::uint32_t>(pieces_[level + 1].size());
    std::vector<std::uint32_t> kids;
    for (auto label : labels) {
      for (std::uint32_t width = 1; width <= branch_; ++width) {
        kids.assign(width, 0);
        while (true) {
          if (!emit(label, kids))
            return false;
          // Next non-decreasing tuple.
          std::size_t k = width;
          while (k > 0 && kids[k - 1] + 1 == below)
            --k;
          if (k == 0)
            break;
          ++kids[k - 1];
          std::fill(kids.begin() + static_cast<std::ptrdiff_t>(k), kids.end(), kids[k - 1]);
        }
      }
    }
    return true;
  }

  void materialise(std::uint64_t root_label, const std::vector<std::uint32_t>& root_kids) {
    counts_.assign(1, static_cast<std::uint32_t>(root_kids.size()));
    labels_.assign(1, root_label);
    std::vector<std::uint32_t> frontier = root_kids;
    std::vector<std::uint32_t> following;
    for (std::size_t l = 1; l < pieces_.size(); ++l) {
      following.clear();
      for (auto idx : frontier) {
        const Piece& p = pieces_[l][idx];
        counts_.push_back(static_cast<std::uint32_t>(p.children.size()));
        labels_.push_back(p.label);
        following.insert(following.end(), p.children.begin(), p.children.end());
      }
      std::swap(frontier, following);
    }
  }

  std::vector<std::uint64_t> readable_;
  std::uint32_t branch_;
  std::vector<std::vector<Piece>> pieces_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint64_t> labels_;
};

inline void leaves_below(const TreeModel& m, NodeIndex n, std::vector<NodeIndex>& branch,
                         std::vector<std::vector<NodeIndex>>& out) {
  branch.push_back(n);
  if (m.is_leaf(n))
    out.push_back(branch);
  for (auto c : m.children(n))
    leaves_below(m, c, branch, out);
  branch.pop_back();
}

// Generic search: violates(truth) receives truth(k) for formulas[k] at the
// current (model, timeline, index) and reports whether that point refutes
// the query.
template <typename Violates>
Verdict search(const std::vector<Formula>& formulas, const Scale& scale, Violates&& violates) {
  std::size_t horizon = 0;
  for (const auto& f : formulas)
    horizon = std::max(horizon, f.horizon());
  if (horizon > scale.depth)
    throw ScaleError("horizon " + std::to_string(horizon) + " exceeds scale depth " + std::to_string(scale.depth));
  if (scale.max_branch == 0)
    throw ScaleError("branching bound must be at least 1");
  if (scale.atoms.size() > 16)
    throw ScaleError("too many atoms for enumeration");
  for (const auto& a : scale.atoms)
    if (!is_identifier(a))
      throw ScaleError("invalid atom '" + a + "' in scale");

  Verdict verdict{scale, 0, std::nullopt};

  auto try_model = [&](const TreeModel& m, std::size_t last_index) {
    Evaluator ev(m);
    std::vector<std::vector<NodeIndex>> branches;
    std::vector<NodeIndex> scratch;
    leaves_below(m, TreeModel::root(), scratch, branches);
    for (const auto& branch : branches) {
      for (std::size_t i = 0; i <= last_index; ++i) {
        auto truth = [&](std::size_t k) { return ev.eval(branch, i, formulas[k]); };
        if (violates(truth)) {
          verdict.counterexample = Counterexample{m, Timeline(branch), i};
          return true;
        }
      }
    }
    return false;
  };

  if (scale.strategy == Strategy::Exhaustive) {
    ModelEnumerator::for_each(scale.atoms, scale.max_branch, scale.depth, [&](const TreeModel& m) {
      ++verdict.models_checked;
      return !try_model(m, scale.depth - horizon);
    });
  } else {
    std::vector<std::uint64_t> readable(horizon + 1, 0);
    for (const auto& f : formulas)
      readable_labels(f, 0, scale.atoms, readable);
    WindowEnumerator windows(std::move(readable), scale.max_branch);
    windows.for_each([&](std::span<const std::uint32_t> counts, std::span<const std::uint64_t> labels) {
      ++verdict.models_checked;
      TreeModel m = TreeModel::from_bfs(horizon, scale.atoms, counts, labels);
      return !try_model(m, 0);
    });
    if (verdict.counterexample) {
      auto [model, timeline] = embed(verdict.counterexample->model, verdict.counterexample->timeline, scale.depth,
                                     scale.atoms);
      verdict.counterexample = Counterexample{std::move(model), std::move(timeline), 0};
    }
  }

  if (verdict.counterexample) {
    const auto& c = *verdict.counterexample;
    auto truth = [&](std::size_t k) { return holds(c.model, c.timeline, c.index, formulas[k]); };
    if (!violates(truth))
      throw std::logic_error("counterexample failed re-verification");
  }
  return verdict;
}

} // namespace detail

/// Searches the scale for (M, pi, i) with M, pi, i not satisfying f.
inline Verdict check_valid(const Formula& f, const Scale& scale) {
  return detail::search({f}, scale, [](auto&& truth) { return !truth(0); });
}

/// Searches for a point satisfying every premise but not the conclusion.
inline Verdict check_entails(const std::vector<Formula>& premises, const Formula& conclusion, const Scale& scale) {
  std::vector<Formula> all = premises;
  all.push_back(conclusion);
  const std::size_t n = premises.size();
  return detail::search(all, scale, [n](auto&& truth) {
    for (std::size_t k = 0; k < n; ++k)
      if (!truth(k))
        return false;
    return !truth(n);
  });
}

/// Searches for a point where f and g differ.
inline Verdict check_equiv(const Formula& f, const Formula& g, const Scale& scale) {
  return detail::search({f, g}, scale, [](auto&& truth) { return truth(0) != truth(1); });
}

// ---------------------------------------------------------------------------
// Random formulas

struct FormulaProfile {
  std::size_t max_size = 8;
  Fragment fragment = Fragment::XL;
  std::vector<std::string> atoms{"p", "q"};
  std::size_t max_horizon = std::numeric_limits<std::size_t>::max();
};

namespace detail {

class FormulaGenerator {
public:
  FormulaGenerator(const FormulaProfile& profile, std::uint64_t seed) : profile_(profile), rng_(seed) {}

  Formula generate() {
    const std::size_t size = 1 + pick(profile_.max_size);
    return of_size(size, profile_.fragment, profile_.max_horizon);
  }

  /// Uniform choice in [0, n) that does not depend on the standard library's
  /// distribution implementations.
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  Formula of_size(std::size_t size, Fragment fragment, std::size_t horizon) {
    if (size == 1) {
      const std::size_t k = pick(profile_.atoms.size() + 1);
      return k == profile_.atoms.size() ? top() : atom(profile_.atoms[k]);
    }
    enum Choice { kNot, kNext, kAll, kAnd, kAnnounce };
    const bool temporal = fragment != Fragment::PC;
    const bool branching = fragment == Fragment::XA || fragment == Fragment::XL;
    const bool dynamic = fragment == Fragment::XAnnounce || fragment == Fragment::XL;
    std::vector<Choice> choices{kNot};
    if (temporal && horizon > 0)
      choices.push_back(kNext);
    if (branching)
      choices.push_back(kAll);
    if (size >= 3) {
      choices.push_back(kAnd);
      if (dynamic)
        choices.push_back(kAnnounce);
    }
    switch (choices[pick(choices.size())]) {
    case kNot:
      return negate(of_size(size - 1, fragment, horizon));
    case kNext:
      return next(of_size(size - 1, fragment, horizon - 1));
    case kAll:
      return nec(of_size(size - 1, fragment, horizon));
    case kAnd: {
      const std::size_t left = 1 + pick(size - 2);
      Formula l = of_size(left, fragment, horizon);
      return conj(l, of_size(size - 1 - left, fragment, horizon));
    }
    case kAnnounce: {
      const std::size_t left = 1 + pick(size - 2);
      Formula a = of_size(left, Fragment::XAnnounce, horizon);
      return announce(a, of_size(size - 1 - left, fragment, horizon));
    }
    }
    return top();
  }

private:
  const FormulaProfile& profile_;
  std::mt19937_64 rng_;
};

} // namespace detail

/// Deterministic per seed. Size is drawn uniformly from 1..max_size;
/// announced formulas never contain A.
inline Formula random_formula(const FormulaProfile& profile, std::uint64_t seed) {
  if (profile.max_size == 0)
    throw std::invalid_argument("max_size must be at least 1");
  if (profile.atoms.empty())
    throw std::invalid_argument("profile needs at least one atom");
  return detail::FormulaGenerator(profile, seed).generate();
}

/// count formulas from consecutive seeds starting at seed.
inline std::vector<Formula> random_corpus(const FormulaProfile& profile, std::size_t count, std::uint64_t seed) {
  std::vector<Formula> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(random_formula(profile, seed + k));
  return out;
}

} // namespace futura
