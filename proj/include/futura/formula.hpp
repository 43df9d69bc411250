#pragma once

// Formula language: atoms, T, negation, conjunction, next (X), necessity (A)
// and the dynamic announcement [psi]phi. Disjunction, implication,
// biconditional, falsum and possibility (E) are sugar over these seven.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "futura/error.hpp"

namespace futura {

enum class Op : std::uint8_t { Atom, Top, Not, And, Next, All, Announce };

/// Immutable, structurally shared formula value.
class Formula {
public:
  Op op() const noexcept;

  /// Atom name; empty for every other operator.
  const std::string& name() const noexcept;

  /// Operand of Not, Next and All.
  const Formula& operand() const;
  const Formula& left() const;
  const Formula& right() const;
  const Formula& announcement() const;
  const Formula& body() const;

  std::size_t size() const noexcept;
  std::size_t horizon() const noexcept;
  /// Look-ahead of an A-free formula. Throws FragmentError if the formula contains A.
  std::size_t sigma() const;

  bool contains_all() const noexcept;
  bool contains_announce() const noexcept;
  bool contains_next() const noexcept;
  std::size_t hash() const noexcept;

  bool same_node(const Formula& other) const noexcept { return node_ == other.node_; }

  friend bool operator==(const Formula& a, const Formula& b) noexcept;

  friend Formula atom(std::string name);
  friend Formula top();
  friend Formula negate(Formula f);
  friend Formula conj(Formula l, Formula r);
  friend Formula next(Formula f);
  friend Formula nec(Formula f);
  friend Formula announce(Formula announcement, Formula body);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  std::string name;
  std::optional<Formula> a;
  std::optional<Formula> b;
  std::size_t size = 1;
  std::size_t horizon = 0;
  bool has_all = false;
  bool has_announce = false;
  bool has_next = false;
  std::size_t hash = 0;
};

namespace detail {

inline std::size_t mix_hash(std::size_t seed, std::size_t value) noexcept {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline bool is_identifier(std::string_view name) noexcept {
  if (name.empty() || name.front() < 'a' || name.front() > 'z')
    return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

} // namespace detail

inline Op Formula::op() const noexcept { return node_->op; }
inline const std::string& Formula::name() const noexcept { return node_->name; }

inline const Formula& Formula::operand() const {
  if (op() != Op::Not && op() != Op::Next && op() != Op::All)
    throw std::logic_error("formula has no single operand");
  return *node_->a;
}

inline const Formula& Formula::left() const {
  if (op() != Op::And)
    throw std::logic_error("formula is not a conjunction");
  return *node_->a;
}

inline const Formula& Formula::right() const {
  if (op() != Op::And)
    throw std::logic_error("formula is not a conjunction");
  return *node_->b;
}

inline const Formula& Formula::announcement() const {
  if (op() != Op::Announce)
    throw std::logic_error("formula is not an announcement");
  return *node_->a;
}

inline const Formula& Formula::body() const {
  if (op() != Op::Announce)
    throw std::logic_error("formula is not an announcement");
  return *node_->b;
}

inline std::size_t Formula::size() const noexcept { return node_->size; }
inline std::size_t Formula::horizon() const noexcept { return node_->horizon; }
inline bool Formula::contains_all() const noexcept { return node_->has_all; }
inline bool Formula::contains_announce() const noexcept { return node_->has_announce; }
inline bool Formula::contains_next() const noexcept { return node_->has_next; }
inline std::size_t Formula::hash() const noexcept { return node_->hash; }

inline std::size_t Formula::sigma() const {
  if (contains_all())
    throw FragmentError("sigma is undefined for formulas containing A");
  // Without A, horizon and sigma follow the same recursion.
  return horizon();
}

inline bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_)
    return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.op != y.op || x.size != y.size)
    return false;
  switch (x.op) {
  case Op::Atom:
    return x.name == y.name;
  case Op::Top:
    return true;
  case Op::Not:
  case Op::Next:
  case Op::All:
    return *x.a == *y.a;
  case Op::And:
  case Op::Announce:
    return *x.a == *y.a && *x.b == *y.b;
  }
  return false;
}

inline Formula atom(std::string name) {
  if (!detail::is_identifier(name))
    throw SyntaxError("invalid atom name '" + name + "'", 0);
  auto node = std::make_shared<Formula::Node>();
  node->op = Op::Atom;
  node->hash = detail::mix_hash(1, std::hash<std::string>{}(name));
  node->name = std::move(name);
  return Formula(std::move(node));
}

inline Formula top() {
  static const Formula t = [] {
    auto node = std::make_shared<Formula::Node>();
    node->op = Op::Top;
    node->hash = 2;
    return Formula(std::move(node));
  }();
  return t;
}

inline Formula negate(Formula f) {
  auto node = std::make_shared<Formula::Node>();
  node->op = Op::Not;
  node->size = f.size() + 1;
  node->horizon = f.horizon();
  node->has_all = f.contains_all();
  node->has_announce = f.contains_announce();
  node->has_next = f.contains_next();
  node->hash = detail::mix_hash(3, f.hash());
  node->a = std::move(f);
  return Formula(std::move(node));
}

inline Formula conj(Formula l, Formula r) {
  auto node = std::make_shared<Formula::Node>();
  node->op = Op::And;
  node->size = l.size() + r.size() + 1;
  node->horizon = std::max(l.horizon(), r.horizon());
  node->has_all = l.contains_all() || r.contains_all();
  node->has_announce = l.contains_announce() || r.contains_announce();
  node->has_next = l.contains_next() || r.contains_next();
  node->hash = detail::mix_hash(detail::mix_hash(4, l.hash()), r.hash());
  node->a = std::move(l);
  node->b = std::move(r);
  return Formula(std::move(node));
}

inline Formula next(Formula f) {
  auto node = std::make_shared<Formula::Node>();
  node->op = Op::Next;
  node->size = f.size() + 1;
  node->horizon = f.horizon() + 1;
  node->has_all = f.contains_all();
  node->has_announce = f.contains_announce();
  node->has_next = true;
  node->hash = detail::mix_hash(5, f.hash());
  node->a = std::move(f);
  return Formula(std::move(node));
}

/// Necessity: A f.
inline Formula nec(Formula f) {
  auto node = std::make_shared<Formula::Node>();
  node->op = Op::All;
  node->size = f.size() + 1;
  node->horizon = f.horizon();
  node->has_all = true;
  node->has_announce = f.contains_announce();
  node->has_next = f.contains_next();
  node->hash = detail::mix_hash(6, f.hash());
  node->a = std::move(f);
  return Formula(std::move(node));
}

/// [announcement] body. The announcement must be A-free.
inline Formula announce(Formula announcement, Formula body) {
  if (announcement.contains_all())
    throw FragmentError("announced formula must not contain A");
  auto node = std::make_shared<Formula::Node>();
  node->op = Op::Announce;
  node->size = announcement.size() + body.size() + 1;
  node->horizon = std::max(announcement.horizon(), body.horizon());
  node->has_all = body.contains_all();
  node->has_announce = true;
  node->has_next = announcement.contains_next() || body.contains_next();
  node->hash = detail::mix_hash(detail::mix_hash(7, announcement.hash()), body.hash());
  node->a = std::move(announcement);
  node->b = std::move(body);
  return Formula(std::move(node));
}

inline Formula bottom() { return negate(top()); }
inline Formula disj(Formula l, Formula r) { return negate(conj(negate(std::move(l)), negate(std::move(r)))); }
inline Formula implies(Formula l, Formula r) { return negate(conj(std::move(l), negate(std::move(r)))); }
inline Formula iff(Formula l, Formula r) { return conj(implies(l, r), implies(r, l)); }
/// Possibility: E f, i.e. ~A~f.
inline Formula poss(Formula f) { return negate(nec(negate(std::move(f)))); }

inline bool is_bottom(const Formula& f) noexcept {
  return f.op() == Op::Not && f.operand().op() == Op::Top;
}

/// Atom names occurring anywhere in f.
inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.op()) {
  case Op::Atom:
    out.insert(f.name());
    return;
  case Op::Top:
    return;
  case Op::Not:
  case Op::Next:
  case Op::All:
    collect_atoms(f.operand(), out);
    return;
  case Op::And:
    collect_atoms(f.left(), out);
    collect_atoms(f.right(), out);
    return;
  case Op::Announce:
    collect_atoms(f.announcement(), out);
    collect_atoms(f.body(), out);
    return;
  }
}

inline std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

inline std::size_t count_announcements(const Formula& f) {
  switch (f.op()) {
  case Op::Atom:
  case Op::Top:
    return 0;
  case Op::Not:
  case Op::Next:
  case Op::All:
    return count_announcements(f.operand());
  case Op::And:
    return count_announcements(f.left()) + count_announcements(f.right());
  case Op::Announce:
    return 1 + count_announcements(f.announcement()) + count_announcements(f.body());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Fragments

enum class Fragment : std::uint8_t { PC, X, XAnnounce, XA, XL };

inline std::string_view to_string(Fragment fragment) noexcept {
  switch (fragment) {
  case Fragment::PC:
    return "PC";
  case Fragment::X:
    return "X";
  case Fragment::XAnnounce:
    return "X[.]";
  case Fragment::XA:
    return "XA";
  case Fragment::XL:
    return "XL";
  }
  return "?";
}

inline bool in_fragment(const Formula& f, Fragment fragment) noexcept {
  switch (fragment) {
  case Fragment::PC:
    return !f.contains_next() && !f.contains_all() && !f.contains_announce();
  case Fragment::X:
    return !f.contains_all() && !f.contains_announce();
  case Fragment::XAnnounce:
    return !f.contains_all();
  case Fragment::XA:
    return !f.contains_announce();
  case Fragment::XL:
    return true;
  }
  return false;
}

struct Classification {
  Fragment fragment;
  bool is_state;
};

/// Syntactic state/temporal split: X is temporal; atoms, T and A are state;
/// an announcement takes the class of its body; negation keeps its operand's
/// class and a conjunction is state only if both conjuncts are.
inline bool is_state_formula(const Formula& f) {
  switch (f.op()) {
  case Op::Atom:
  case Op::Top:
  case Op::All:
    return true;
  case Op::Next:
    return false;
  case Op::Not:
    return is_state_formula(f.operand());
  case Op::And:
    return is_state_formula(f.left()) && is_state_formula(f.right());
  case Op::Announce:
    return is_state_formula(f.body());
  }
  return false;
}

inline Classification classify(const Formula& f) {
  Fragment fragment = Fragment::XL;
  for (auto candidate : {Fragment::PC, Fragment::X, Fragment::XAnnounce, Fragment::XA}) {
    if (in_fragment(f, candidate)) {
      fragment = candidate;
      break;
    }
  }
  return {fragment, is_state_formula(f)};
}

} // namespace futura

template <>
struct std::hash<futura::Formula> {
  std::size_t operator()(const futura::Formula& f) const noexcept { return f.hash(); }
};
