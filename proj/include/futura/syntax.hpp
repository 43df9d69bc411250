#pragma once

// Concrete syntax:
//
//   iff     := imp ('<->' imp)*          left-associative
//   imp     := or ('->' imp)?            right-associative
//   or      := and ('|' and)*
//   and     := prefix ('&' prefix)*
//   prefix  := ('~' | 'X' | 'A' | 'E') prefix | '[' iff ']' prefix | primary
//   primary := ident | 'T' | '(' iff ')'
//
// ident is [a-z][a-z0-9_]*. Sugar is removed while parsing.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "futura/formula.hpp"

namespace futura {

namespace detail {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_iff();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token)
      return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token))
      fail("expected '" + std::string(token) + "'");
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept("<->"))
      f = iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept("->"))
      return implies(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|"))
      f = disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_prefix();
    while (accept("&"))
      f = conj(f, parse_prefix());
    return f;
  }

  Formula parse_prefix() {
    skip_space();
    if (pos_ >= text_.size())
      fail("unexpected end of input");
    const char c = text_[pos_];
    switch (c) {
    case '~':
      ++pos_;
      return negate(parse_prefix());
    case 'X':
      ++pos_;
      return next(parse_prefix());
    case 'A':
      ++pos_;
      return nec(parse_prefix());
    case 'E':
      ++pos_;
      return poss(parse_prefix());
    case '[': {
      const std::size_t start = pos_;
      ++pos_;
      Formula announced = parse_iff();
      expect("]");
      if (announced.contains_all())
        throw SyntaxError("announced formula must not contain A or E", start);
      return announce(std::move(announced), parse_prefix());
    }
    default:
      return parse_primary();
    }
  }

  Formula parse_primary() {
    skip_space();
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Formula f = parse_iff();
      expect(")");
      return f;
    }
    if (c == 'T') {
      ++pos_;
      return top();
    }
    if (c >= 'a' && c <= 'z') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::islower(static_cast<unsigned char>(text_[pos_])) ||
              std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      return atom(std::string(text_.substr(start, pos_ - start)));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

enum Precedence : int { kIff = 1, kImp = 2, kOr = 3, kAnd = 4, kPrefix = 5 };

inline std::optional<std::pair<Formula, Formula>> match_implication(const Formula& f) {
  if (f.op() != Op::Not || f.operand().op() != Op::And)
    return std::nullopt;
  const Formula& inner = f.operand();
  if (inner.right().op() != Op::Not)
    return std::nullopt;
  return std::make_pair(inner.left(), inner.right().operand());
}

inline std::optional<std::pair<Formula, Formula>> match_disjunction(const Formula& f) {
  auto imp = match_implication(f);
  if (!imp || imp->first.op() != Op::Not)
    return std::nullopt;
  return std::make_pair(imp->first.operand(), imp->second);
}

inline std::optional<std::pair<Formula, Formula>> match_biconditional(const Formula& f) {
  if (f.op() != Op::And)
    return std::nullopt;
  auto l = match_implication(f.left());
  auto r = match_implication(f.right());
  if (!l || !r || !(l->first == r->second) || !(l->second == r->first))
    return std::nullopt;
  return l;
}

inline std::optional<Formula> match_possibility(const Formula& f) {
  if (f.op() != Op::Not || f.operand().op() != Op::All || f.operand().operand().op() != Op::Not)
    return std::nullopt;
  return f.operand().operand().operand();
}

class Printer {
public:
  std::string render(const Formula& f, int min_precedence) {
    std::string text;
    const int prec = emit(f, text);
    if (prec < min_precedence)
      return "(" + text + ")";
    return text;
  }

private:
  int emit(const Formula& f, std::string& out) {
    if (auto b = match_biconditional(f)) {
      out += render(b->first, kIff) + " <-> " + render(b->second, kImp);
      return kIff;
    }
    // ~(a | b) & ~c reads better as a | b -> c, and (a & ~b) | c as (a -> b) -> c.
    if (auto d = match_disjunction(f); d && !match_implication(negate(d->first))) {
      out += render(d->first, kOr) + " | " + render(d->second, kAnd);
      return kOr;
    }
    if (auto i = match_implication(f)) {
      out += render(i->first, kOr) + " -> " + render(i->second, kImp);
      return kImp;
    }
    if (auto p = match_possibility(f)) {
      out += "E " + render(*p, kPrefix);
      return kPrefix;
    }
    switch (f.op()) {
    case Op::Atom:
      out += f.name();
      break;
    case Op::Top:
      out += "T";
      break;
    case Op::Not:
      out += "~" + render(f.operand(), kPrefix);
      break;
    case Op::And:
      out += render(f.left(), kAnd) + " & " + render(f.right(), kPrefix);
      return kAnd;
    case Op::Next:
      out += "X " + render(f.operand(), kPrefix);
      break;
    case Op::All:
      out += "A " + render(f.operand(), kPrefix);
      break;
    case Op::Announce:
      out += "[" + render(f.announcement(), 0) + "] " + render(f.body(), kPrefix);
      break;
    }
    return kPrefix;
  }
};

} // namespace detail

/// Parses the concrete syntax; throws SyntaxError with a byte offset.
inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

/// Renders f with minimal parentheses, re-sugaring |, ->, <-> and E.
inline std::string to_string(const Formula& f) { return detail::Printer().render(f, 0); }

} // namespace futura
