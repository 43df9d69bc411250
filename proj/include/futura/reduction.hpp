#pragma once

// Compilation of announcements away: every [phi]psi is rewritten into an
// equivalent announcement-free formula by
//   1. replacing announcements nested in phi ([a]b becomes a -> b),
//   2. putting phi into clauses (pc_1 | X x_1) & ... & (pc_n | X x_n),
//   3. splitting the conjunction into nested single-clause announcements,
//   4. pushing each clause announcement inward with the reduction axioms.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "futura/error.hpp"
#include "futura/formula.hpp"
#include "futura/syntax.hpp"

namespace futura {

/// pc | X x, with pc propositional and x built from atoms, T, ~, & and X.
struct NormalClause {
  Formula pc;
  Formula x;

  Formula to_formula() const { return disj(pc, next(x)); }
  friend bool operator==(const NormalClause&, const NormalClause&) = default;
};

struct RewriteStep {
  std::string rule;
  Formula before;
  Formula after;
};

using RewriteTrace = std::vector<RewriteStep>;

/// One line per step: `rule: before ==> after`.
inline std::string to_string(const RewriteTrace& trace) {
  std::ostringstream out;
  for (const auto& step : trace)
    out << step.rule << ": " << to_string(step.before) << " ==> " << to_string(step.after) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Announcement elimination inside the A-free fragment

/// Rewrites [a]b to a -> b bottom-up. Valid because once a and b are
/// announcement-free their truth depends only on the timeline.
inline Formula elim_announce(const Formula& f) {
  if (f.contains_all())
    throw FragmentError("announcement elimination needs an A-free formula");
  if (!f.contains_announce())
    return f;
  switch (f.op()) {
  case Op::Not:
    return negate(elim_announce(f.operand()));
  case Op::And:
    return conj(elim_announce(f.left()), elim_announce(f.right()));
  case Op::Next:
    return next(elim_announce(f.operand()));
  case Op::Announce:
    return implies(elim_announce(f.announcement()), elim_announce(f.body()));
  default:
    return f;
  }
}

// ---------------------------------------------------------------------------
// Clausal normal form

namespace detail {

struct RawClause {
  std::set<std::pair<std::string, bool>> literals;
  std::vector<Formula> next_parts;
};

using RawCnf = std::vector<RawClause>;

inline std::size_t cnf_size(const RawCnf& cnf) {
  std::size_t total = 0;
  for (const auto& c : cnf) {
    total += 1 + c.literals.size();
    for (const auto& x : c.next_parts)
      total += x.size();
  }
  return total;
}

// Literals are atoms at the current position and formulas X g; negation
// passes through X because a timeline has exactly one next position.
inline RawCnf to_cnf(const Formula& f, bool positive, std::size_t budget) {
  switch (f.op()) {
  case Op::Atom:
    return {RawClause{{{f.name(), positive}}, {}}};
  case Op::Top:
    return positive ? RawCnf{} : RawCnf{RawClause{}};
  case Op::Not:
    return to_cnf(f.operand(), !positive, budget);
  case Op::Next:
    return {RawClause{{}, {positive ? f.operand() : negate(f.operand())}}};
  case Op::And: {
    auto l = to_cnf(f.left(), positive, budget);
    auto r = to_cnf(f.right(), positive, budget);
    RawCnf out;
    if (positive) {
      out = std::move(l);
      out.insert(out.end(), r.begin(), r.end());
    } else {
      for (const auto& a : l) {
        for (const auto& b : r) {
          RawClause c = a;
          c.literals.insert(b.literals.begin(), b.literals.end());
          c.next_parts.insert(c.next_parts.end(), b.next_parts.begin(), b.next_parts.end());
          out.push_back(std::move(c));
        }
        if (cnf_size(out) > budget)
          throw NormalFormTooLarge("normal form exceeds " + std::to_string(budget) + " nodes");
      }
    }
    if (cnf_size(out) > budget)
      throw NormalFormTooLarge("normal form exceeds " + std::to_string(budget) + " nodes");
    return out;
  }
  default:
    throw FragmentError("normal form needs a formula built from atoms, T, ~, & and X");
  }
}

inline Formula fold_disjunction(const std::vector<Formula>& parts) {
  if (parts.empty())
    return bottom();
  Formula out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k)
    out = disj(out, parts[k]);
  return out;
}

} // namespace detail

/// Conjunction of clauses equivalent to f (f must be announcement- and A-free).
/// A valid f yields the single clause T | X ~T.
inline std::vector<NormalClause> normal_form(const Formula& f, std::size_t max_nodes = 10000) {
  if (!in_fragment(f, Fragment::X))
    throw FragmentError("normal form needs a formula built from atoms, T, ~, & and X");
  std::vector<NormalClause> clauses;
  for (const auto& raw : detail::to_cnf(f, true, max_nodes)) {
    bool tautology = false;
    std::vector<Formula> pc_parts;
    for (const auto& [name, positive] : raw.literals) {
      if (positive && raw.literals.contains({name, false}))
        tautology = true;
      pc_parts.push_back(positive ? atom(name) : negate(atom(name)));
    }
    if (tautology)
      continue;
    std::vector<Formula> x_parts;
    for (const auto& x : raw.next_parts)
      if (std::find(x_parts.begin(), x_parts.end(), x) == x_parts.end())
        x_parts.push_back(x);
    clauses.push_back({detail::fold_disjunction(pc_parts), detail::fold_disjunction(x_parts)});
  }
  if (clauses.empty())
    clauses.push_back({top(), bottom()});
  return clauses;
}

/// C1 & (C2 & (... & Cn)).
inline Formula clause_conjunction(const std::vector<NormalClause>& clauses) {
  if (clauses.empty())
    return top();
  Formula out = clauses.back().to_formula();
  for (std::size_t k = clauses.size() - 1; k-- > 0;)
    out = conj(clauses[k].to_formula(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Simplification

/// Removes introduced constants: ~~x, T&x, x&T, F&x, x&F, XT, XF, AT, AF
/// (F is ~T). Announced formulas are left untouched so clause shapes survive.
inline Formula simplify(const Formula& f) {
  switch (f.op()) {
  case Op::Atom:
  case Op::Top:
    return f;
  case Op::Not: {
    Formula g = simplify(f.operand());
    if (g.op() == Op::Not)
      return g.operand();
    return g.same_node(f.operand()) ? f : negate(g);
  }
  case Op::And: {
    Formula l = simplify(f.left());
    Formula r = simplify(f.right());
    if (l.op() == Op::Top)
      return r;
    if (r.op() == Op::Top)
      return l;
    if (is_bottom(l) || is_bottom(r))
      return bottom();
    return l.same_node(f.left()) && r.same_node(f.right()) ? f : conj(l, r);
  }
  case Op::Next:
  case Op::All: {
    Formula g = simplify(f.operand());
    if (g.op() == Op::Top || is_bottom(g))
      return g;
    if (g.same_node(f.operand()))
      return f;
    return f.op() == Op::Next ? next(g) : nec(g);
  }
  case Op::Announce: {
    Formula b = simplify(f.body());
    return b.same_node(f.body()) ? f : announce(f.announcement(), b);
  }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Rewrite rules

namespace rules {

/// Splits a clause-shaped announcement pc | X x with propositional pc.
inline std::optional<std::pair<Formula, Formula>> match_clause(const Formula& announced) {
  auto d = detail::match_disjunction(announced);
  if (!d || d->second.op() != Op::Next || !in_fragment(d->first, Fragment::PC))
    return std::nullopt;
  return std::make_pair(d->first, d->second.operand());
}

inline Formula push_atom(const Formula& a, const Formula& atom_body) { return implies(a, atom_body); }
inline Formula push_top() { return top(); }
inline Formula push_not(const Formula& a, const Formula& g) { return implies(a, negate(announce(a, g))); }
inline Formula push_and(const Formula& a, const Formula& g, const Formula& h) {
  return conj(announce(a, g), announce(a, h));
}

/// [pc | X x] X g  ==>  (pc -> X g) & (~pc -> X [x] g). Only sound for propositional pc.
inline Formula push_next(const Formula& pc, const Formula& x, const Formula& g) {
  if (!in_fragment(pc, Fragment::PC))
    throw std::logic_error("push_next applied with a non-propositional guard: " + to_string(pc));
  return conj(implies(pc, next(g)), implies(negate(pc), next(announce(x, g))));
}

inline Formula push_all(const Formula& a, const Formula& g) { return implies(a, nec(announce(a, g))); }
inline Formula split(const Formula& l, const Formula& r, const Formula& body) { return announce(l, announce(r, body)); }
inline Formula merge(const Formula& a, const Formula& b, const Formula& c) {
  return announce(conj(a, announce(a, b)), c);
}

/// First applicable rule at an announcement node, in the order
/// push_atom .. push_all, split, merge.
inline std::optional<std::pair<Formula, std::string>> apply_at(const Formula& node) {
  if (node.op() != Op::Announce)
    return std::nullopt;
  const Formula& a = node.announcement();
  const Formula& body = node.body();
  switch (body.op()) {
  case Op::Atom:
    return std::make_pair(push_atom(a, body), std::string("push-atom"));
  case Op::Top:
    return std::make_pair(push_top(), std::string("push-top"));
  case Op::Not:
    return std::make_pair(push_not(a, body.operand()), std::string("push-not"));
  case Op::And:
    return std::make_pair(push_and(a, body.left(), body.right()), std::string("push-and"));
  case Op::Next:
    if (auto clause = match_clause(a))
      return std::make_pair(push_next(clause->first, clause->second, body.operand()), std::string("push-next"));
    break;
  case Op::All:
    return std::make_pair(push_all(a, body.operand()), std::string("push-all"));
  case Op::Announce:
    break;
  }
  if (a.op() == Op::And)
    return std::make_pair(split(a.left(), a.right(), body), std::string("split"));
  if (body.op() == Op::Announce)
    return std::make_pair(merge(a, body.announcement(), body.body()), std::string("merge"));
  return std::nullopt;
}

} // namespace rules

struct RewriteResult {
  Formula formula;
  std::string rule;
};

/// Applies one rule at the innermost-leftmost announcement where any rule
/// applies; nullopt when none does.
inline std::optional<RewriteResult> rewrite_step(const Formula& f) {
  auto rebuild1 = [&](const Formula& child) -> Formula {
    switch (f.op()) {
    case Op::Not:
      return negate(child);
    case Op::Next:
      return next(child);
    default:
      return nec(child);
    }
  };
  switch (f.op()) {
  case Op::Atom:
  case Op::Top:
    return std::nullopt;
  case Op::Not:
  case Op::Next:
  case Op::All:
    if (auto r = rewrite_step(f.operand()))
      return RewriteResult{rebuild1(r->formula), r->rule};
    return std::nullopt;
  case Op::And:
    if (auto r = rewrite_step(f.left()))
      return RewriteResult{conj(r->formula, f.right()), r->rule};
    if (auto r = rewrite_step(f.right()))
      return RewriteResult{conj(f.left(), r->formula), r->rule};
    return std::nullopt;
  case Op::Announce:
    if (auto r = rewrite_step(f.announcement()))
      return RewriteResult{announce(r->formula, f.body()), r->rule};
    if (auto r = rewrite_step(f.body()))
      return RewriteResult{announce(f.announcement(), r->formula), r->rule};
    if (auto r = rules::apply_at(f))
      return RewriteResult{r->first, r->second};
    return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Full reduction

struct ReduceOptions {
  std::size_t max_normal_form_nodes = 10000;
};

struct Reduction {
  Formula result;
  RewriteTrace trace;
  /// Number of announcement operators before the first and after each
  /// elimination round; strictly decreasing.
  std::vector<std::size_t> announcement_counts;
};

namespace detail {

using Plug = std::function<Formula(const Formula&)>;

// Child index 0 is the operand, left conjunct or announcement; 1 is the
// right conjunct or the body.
inline Formula replace_at(const Formula& f, const std::vector<int>& path, std::size_t depth, const Formula& x) {
  if (depth == path.size())
    return x;
  const int step = path[depth];
  switch (f.op()) {
  case Op::Not:
    return negate(replace_at(f.operand(), path, depth + 1, x));
  case Op::Next:
    return next(replace_at(f.operand(), path, depth + 1, x));
  case Op::All:
    return nec(replace_at(f.operand(), path, depth + 1, x));
  case Op::And:
    return step == 0 ? conj(replace_at(f.left(), path, depth + 1, x), f.right())
                     : conj(f.left(), replace_at(f.right(), path, depth + 1, x));
  case Op::Announce:
    return step == 0 ? announce(replace_at(f.announcement(), path, depth + 1, x), f.body())
                     : announce(f.announcement(), replace_at(f.body(), path, depth + 1, x));
  default:
    throw std::logic_error("invalid formula path");
  }
}

// Innermost-leftmost announcement whose body is announcement-free, without
// descending into announced formulas (those are cleared by step 1).
inline bool find_redex(const Formula& f, std::vector<int>& path) {
  switch (f.op()) {
  case Op::Atom:
  case Op::Top:
    return false;
  case Op::Not:
  case Op::Next:
  case Op::All:
    path.push_back(0);
    if (find_redex(f.operand(), path))
      return true;
    path.pop_back();
    return false;
  case Op::And:
    for (int side : {0, 1}) {
      path.push_back(side);
      if (find_redex(side == 0 ? f.left() : f.right(), path))
        return true;
      path.pop_back();
    }
    return false;
  case Op::Announce:
    path.push_back(1);
    if (find_redex(f.body(), path))
      return true;
    path.pop_back();
    return true;
  }
  return false;
}

class Reducer {
public:
  Reducer(const ReduceOptions& options, RewriteTrace& trace) : options_(options), trace_(trace) {}

  /// Eliminates the announcement at node (whose body is announcement-free).
  /// plug rebuilds the whole formula around a replacement for node.
  Formula eliminate(Formula node, const Plug& plug) {
    Formula a = node.announcement();
    const Formula body = node.body();

    if (a.contains_announce()) {
      a = elim_announce(a);
      node = record("elim-announce", plug, node, announce(a, body));
    }

    if (auto clause = rules::match_clause(a))
      return push(a, clause->first, clause->second, body, node, plug);

    if (a.op() == Op::And) {
      const Formula l = a.left();
      record("split", plug, node, rules::split(l, a.right(), body));
      Formula inner = eliminate(announce(a.right(), body), [&](const Formula& y) { return plug(announce(l, y)); });
      return eliminate(announce(l, inner), plug);
    }

    Formula clauses = clause_conjunction(normal_form(a, options_.max_normal_form_nodes));
    return eliminate(record("normal-form", plug, node, announce(clauses, body)), plug);
  }

private:
  Formula record(std::string rule, const Plug& plug, const Formula& before, Formula after) {
    trace_.push_back({std::move(rule), plug(before), plug(after)});
    return after;
  }

  Formula finish(const Formula& out, const Plug& plug) {
    Formula s = simplify(out);
    if (!s.same_node(out))
      trace_.back().after = plug(s);
    return s;
  }

  Formula push(const Formula& a, const Formula& pc, const Formula& x, const Formula& body, const Formula& node,
               const Plug& plug) {
    switch (body.op()) {
    case Op::Atom:
      return finish(record("push-atom", plug, node, rules::push_atom(a, body)), plug);
    case Op::Top:
      return record("push-top", plug, node, rules::push_top());
    case Op::Not: {
      record("push-not", plug, node, rules::push_not(a, body.operand()));
      Formula g = eliminate(announce(a, body.operand()),
                            [&](const Formula& y) { return plug(implies(a, negate(y))); });
      return finish(implies(a, negate(g)), plug);
    }
    case Op::And: {
      const Formula h = body.right();
      record("push-and", plug, node, rules::push_and(a, body.left(), h));
      Formula g2 = eliminate(announce(a, body.left()),
                             [&](const Formula& y) { return plug(conj(y, announce(a, h))); });
      Formula h2 = eliminate(announce(a, h), [&](const Formula& y) { return plug(conj(g2, y)); });
      return finish(conj(g2, h2), plug);
    }
    case Op::Next: {
      const Formula g = body.operand();
      record("push-next", plug, node, rules::push_next(pc, x, g));
      auto around = [&](const Formula& y) { return conj(implies(pc, next(g)), implies(negate(pc), next(y))); };
      Formula inner = eliminate(announce(x, g), [&](const Formula& y) { return plug(around(y)); });
      return finish(around(inner), plug);
    }
    case Op::All: {
      record("push-all", plug, node, rules::push_all(a, body.operand()));
      Formula g = eliminate(announce(a, body.operand()),
                            [&](const Formula& y) { return plug(implies(a, nec(y))); });
      return finish(implies(a, nec(g)), plug);
    }
    case Op::Announce:
      break;
    }
    throw std::logic_error("reduction reached a nested announcement in a body");
  }

  const ReduceOptions& options_;
  RewriteTrace& trace_;
};

} // namespace detail

/// Equivalent formula without announcements, with the full rewrite trace.
inline Reduction reduce_to_xa(const Formula& f, const ReduceOptions& options = {}) {
  Reduction out{f, {}, {count_announcements(f)}};
  detail::Reducer reducer(options, out.trace);
  std::vector<int> path;
  while (detail::find_redex(out.result, path)) {
    const Formula theta = out.result;
    Formula node = theta;
    for (int step : path) {
      if (node.op() == Op::Announce)
        node = step == 0 ? node.announcement() : node.body();
      else if (node.op() == Op::And)
        node = step == 0 ? node.left() : node.right();
      else
        node = node.operand();
    }
    auto plug = [&](const Formula& x) { return detail::replace_at(theta, path, 0, x); };
    out.result = plug(reducer.eliminate(node, plug));
    const std::size_t remaining = count_announcements(out.result);
    if (remaining >= out.announcement_counts.back())
      throw std::logic_error("reduction round did not remove an announcement");
    out.announcement_counts.push_back(remaining);
    path.clear();
  }
  return out;
}

} // namespace futura
