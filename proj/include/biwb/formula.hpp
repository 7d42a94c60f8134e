#pragma once
// Propositional language of bunched implications: additives (&, |, ->, top,
// bot), multiplicatives (*, -*, unit) and the ordered divisions (\, /).
// Formulas are immutable trees with shared subterms.

#include <cassert>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace biwb {

// Commutative selects plain BI (comma commutes, -* available, \ and / are
// notational variants of -*). NonCommutative selects the ordered variant
// where only the divisions exist.
enum class Mode { Commutative, NonCommutative };

enum class FKind { Atom, Top, Bot, One, Neg, And, Or, Imp, Star, Wand, Ldiv, Rdiv };

inline bool fkind_binary(FKind k) {
  return k == FKind::And || k == FKind::Or || k == FKind::Imp || k == FKind::Star ||
         k == FKind::Wand || k == FKind::Ldiv || k == FKind::Rdiv;
}

class Formula {
  struct Node {
    FKind k;
    std::string name;  // Atom payload
    std::shared_ptr<const Node> l, r;
  };
  std::shared_ptr<const Node> n_;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static Formula mk(FKind k, std::string name, Formula l, Formula r) {
    auto n = std::make_shared<Node>();
    n->k = k;
    n->name = std::move(name);
    n->l = l.n_;
    n->r = r.n_;
    return Formula(std::move(n));
  }

public:
  Formula() = default;  // empty handle; valid() is false

  static Formula atom(std::string name) { return mk(FKind::Atom, std::move(name), {}, {}); }
  static Formula top() { return mk(FKind::Top, {}, {}, {}); }
  static Formula bot() { return mk(FKind::Bot, {}, {}, {}); }
  static Formula one() { return mk(FKind::One, {}, {}, {}); }
  static Formula neg(Formula a) { return mk(FKind::Neg, {}, std::move(a), {}); }
  static Formula binary(FKind k, Formula a, Formula b) {
    assert(fkind_binary(k));
    return mk(k, {}, std::move(a), std::move(b));
  }
  static Formula conj(Formula a, Formula b) { return binary(FKind::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(FKind::Or, std::move(a), std::move(b)); }
  static Formula imp(Formula a, Formula b) { return binary(FKind::Imp, std::move(a), std::move(b)); }
  static Formula star(Formula a, Formula b) { return binary(FKind::Star, std::move(a), std::move(b)); }
  static Formula wand(Formula a, Formula b) { return binary(FKind::Wand, std::move(a), std::move(b)); }
  static Formula ldiv(Formula a, Formula b) { return binary(FKind::Ldiv, std::move(a), std::move(b)); }
  static Formula rdiv(Formula a, Formula b) { return binary(FKind::Rdiv, std::move(a), std::move(b)); }

  bool valid() const { return n_ != nullptr; }
  FKind kind() const { assert(n_); return n_->k; }
  const std::string& name() const { assert(n_ && n_->k == FKind::Atom); return n_->name; }
  Formula left() const { assert(n_); return Formula(n_->l); }
  Formula right() const { assert(n_); return Formula(n_->r); }
  Formula child() const { return left(); }

  bool same_node(const Formula& o) const { return n_ == o.n_; }
};

inline int compare(const Formula& a, const Formula& b) {
  if (a.same_node(b)) return 0;
  if (!a.valid() || !b.valid()) return int(a.valid()) - int(b.valid());
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case FKind::Atom:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case FKind::Top:
    case FKind::Bot:
    case FKind::One:
      return 0;
    case FKind::Neg:
      return compare(a.child(), b.child());
    default: {
      int c = compare(a.left(), b.left());
      return c != 0 ? c : compare(a.right(), b.right());
    }
  }
}

inline bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
inline bool operator!=(const Formula& a, const Formula& b) { return compare(a, b) != 0; }
inline bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

// In commutative mode -*, \ and / denote one connective; normalization
// rewrites both divisions to -* so that structural comparison implements
// the identification. Surface forms are preserved everywhere else.
inline Formula normalize(const Formula& f, Mode mode) {
  if (!f.valid() || mode == Mode::NonCommutative) return f;
  switch (f.kind()) {
    case FKind::Atom:
    case FKind::Top:
    case FKind::Bot:
    case FKind::One:
      return f;
    case FKind::Neg:
      return Formula::neg(normalize(f.child(), mode));
    case FKind::Ldiv:
      return Formula::wand(normalize(f.left(), mode), normalize(f.right(), mode));
    case FKind::Rdiv:  // a / b == b \ a
      return Formula::wand(normalize(f.right(), mode), normalize(f.left(), mode));
    default:
      return Formula::binary(f.kind(), normalize(f.left(), mode), normalize(f.right(), mode));
  }
}

inline bool equal_in(const Formula& a, const Formula& b, Mode mode) {
  return normalize(a, mode) == normalize(b, mode);
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (!f.valid()) return;
  if (f.kind() == FKind::Atom) { out.insert(f.name()); return; }
  collect_atoms(f.left(), out);
  collect_atoms(f.right(), out);
}

inline std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

inline Formula substitute(const Formula& f, const std::string& name, const Formula& g) {
  if (!f.valid()) return f;
  switch (f.kind()) {
    case FKind::Atom:
      return f.name() == name ? g : f;
    case FKind::Top:
    case FKind::Bot:
    case FKind::One:
      return f;
    case FKind::Neg:
      return Formula::neg(substitute(f.child(), name, g));
    default:
      return Formula::binary(f.kind(), substitute(f.left(), name, g),
                             substitute(f.right(), name, g));
  }
}

inline size_t formula_size(const Formula& f) {
  if (!f.valid()) return 0;
  if (f.kind() == FKind::Atom || f.kind() == FKind::Top || f.kind() == FKind::Bot ||
      f.kind() == FKind::One)
    return 1;
  return 1 + formula_size(f.left()) + formula_size(f.right());
}

// Binding strength, loosest to tightest: -> (no chaining), | and & (both
// left-associative), the multiplicative family * -* \ / (no chaining), ~.
inline int print_level(FKind k) {
  switch (k) {
    case FKind::Imp: return 0;
    case FKind::Or: return 1;
    case FKind::And: return 2;
    case FKind::Star:
    case FKind::Wand:
    case FKind::Ldiv:
    case FKind::Rdiv: return 3;
    case FKind::Neg: return 4;
    default: return 5;
  }
}

inline void render(const Formula& f, int min_level, std::string& out) {
  assert(f.valid());
  int lv = print_level(f.kind());
  bool paren = lv < min_level;
  if (paren) out += '(';
  switch (f.kind()) {
    case FKind::Atom: out += f.name(); break;
    case FKind::Top: out += "top"; break;
    case FKind::Bot: out += "bot"; break;
    case FKind::One: out += "unit"; break;
    case FKind::Neg:
      out += '~';
      render(f.child(), 4, out);
      break;
    case FKind::Imp:
      render(f.left(), 1, out);
      out += " -> ";
      render(f.right(), 1, out);
      break;
    case FKind::Or:
      render(f.left(), 1, out);
      out += " | ";
      render(f.right(), 2, out);
      break;
    case FKind::And:
      render(f.left(), 2, out);
      out += " & ";
      render(f.right(), 3, out);
      break;
    case FKind::Star:
    case FKind::Wand:
    case FKind::Ldiv:
    case FKind::Rdiv:
      render(f.left(), 4, out);
      out += f.kind() == FKind::Star ? " * "
           : f.kind() == FKind::Wand ? " -* "
           : f.kind() == FKind::Ldiv ? " \\ " : " / ";
      render(f.right(), 4, out);
      break;
  }
  if (paren) out += ')';
}

inline std::string to_text(const Formula& f) {
  std::string out;
  render(f, 0, out);
  return out;
}

}  // namespace biwb
