#pragma once
// Bunches: antecedent trees built from formulas with two separators, the
// multiplicative comma (unit e*) and the additive semicolon (unit e+).
// Nodes are n-ary so the written grouping is preserved; canonical() flattens
// runs of one separator, absorbs units and sorts commutative siblings, which
// decides the congruence generated by the monoid equations.

#include <algorithm>
#include <cassert>
#include <memory>
#include <string>
#include <vector>

#include "formula.hpp"

namespace biwb {

enum class BKind { MultUnit, AddUnit, Leaf, Comma, Semi };

class Bunch {
  struct Node {
    BKind k;
    Formula f;               // Leaf payload
    std::vector<Bunch> ch;   // Comma/Semi payload, size >= 2
  };
  std::shared_ptr<const Node> n_;
  explicit Bunch(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static Bunch mk(BKind k, Formula f, std::vector<Bunch> ch) {
    auto n = std::make_shared<Node>();
    n->k = k;
    n->f = std::move(f);
    n->ch = std::move(ch);
    return Bunch(std::move(n));
  }

public:
  Bunch() = default;

  static Bunch leaf(Formula f) { return mk(BKind::Leaf, std::move(f), {}); }
  static Bunch mult_unit() { return mk(BKind::MultUnit, {}, {}); }
  static Bunch add_unit() { return mk(BKind::AddUnit, {}, {}); }
  static Bunch comma(std::vector<Bunch> ch) {
    assert(ch.size() >= 2);
    return mk(BKind::Comma, {}, std::move(ch));
  }
  static Bunch semi(std::vector<Bunch> ch) {
    assert(ch.size() >= 2);
    return mk(BKind::Semi, {}, std::move(ch));
  }
  static Bunch comma(Bunch a, Bunch b) { return comma(std::vector<Bunch>{std::move(a), std::move(b)}); }
  static Bunch semi(Bunch a, Bunch b) { return semi(std::vector<Bunch>{std::move(a), std::move(b)}); }

  bool valid() const { return n_ != nullptr; }
  BKind kind() const { assert(n_); return n_->k; }
  const Formula& formula() const { assert(n_ && n_->k == BKind::Leaf); return n_->f; }
  const std::vector<Bunch>& children() const { assert(n_); return n_->ch; }
  bool is_node(BKind k) const { return n_ && n_->k == k; }
  bool same_node(const Bunch& o) const { return n_ == o.n_; }
};

inline int compare(const Bunch& a, const Bunch& b) {
  if (a.same_node(b)) return 0;
  if (!a.valid() || !b.valid()) return int(a.valid()) - int(b.valid());
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() == BKind::Leaf) return compare(a.formula(), b.formula());
  if (a.kind() == BKind::MultUnit || a.kind() == BKind::AddUnit) return 0;
  const auto& x = a.children();
  const auto& y = b.children();
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    int c = compare(x[i], y[i]);
    if (c != 0) return c;
  }
  return x.size() < y.size() ? -1 : (x.size() == y.size() ? 0 : 1);
}

inline bool operator==(const Bunch& a, const Bunch& b) { return compare(a, b) == 0; }
inline bool operator!=(const Bunch& a, const Bunch& b) { return compare(a, b) != 0; }
inline bool operator<(const Bunch& a, const Bunch& b) { return compare(a, b) < 0; }

// Unit of a separator, and the separator's node kind test.
inline Bunch unit_of(BKind sep) { return sep == BKind::Comma ? Bunch::mult_unit() : Bunch::add_unit(); }
inline BKind unit_kind(BKind sep) { return sep == BKind::Comma ? BKind::MultUnit : BKind::AddUnit; }

// Children of b viewed as an n-ary sep-node: a sep node contributes its
// children, the sep's unit contributes nothing, anything else is itself.
inline std::vector<Bunch> parts(const Bunch& b, BKind sep) {
  if (b.kind() == sep) return b.children();
  if (b.kind() == unit_kind(sep)) return {};
  return {b};
}

// Rebuild an n-ary sep-node from parts (unit for none, the part for one).
inline Bunch join(std::vector<Bunch> ps, BKind sep) {
  if (ps.empty()) return unit_of(sep);
  if (ps.size() == 1) return ps[0];
  return sep == BKind::Comma ? Bunch::comma(std::move(ps)) : Bunch::semi(std::move(ps));
}

// Canonical representative of the monoid congruence: flatten, absorb units,
// sort semicolon siblings always and comma siblings only when the comma is
// commutative. Two bunches are congruent iff their canonical forms are equal.
inline Bunch canonical(const Bunch& b, Mode mode = Mode::Commutative) {
  assert(b.valid());
  switch (b.kind()) {
    case BKind::Leaf:
    case BKind::MultUnit:
    case BKind::AddUnit:
      return b;
    case BKind::Comma:
    case BKind::Semi: {
      BKind sep = b.kind();
      std::vector<Bunch> flat;
      for (const auto& c : b.children()) {
        Bunch cc = canonical(c, mode);
        for (auto& p : parts(cc, sep)) flat.push_back(std::move(p));
      }
      if (sep == BKind::Semi || mode == Mode::Commutative)
        std::stable_sort(flat.begin(), flat.end());
      return join(std::move(flat), sep);
    }
  }
  return b;
}

inline bool congruent(const Bunch& a, const Bunch& b, Mode mode = Mode::Commutative) {
  return canonical(a, mode) == canonical(b, mode);
}

// Leaf formulas rewritten through formula normalization (division/wand
// identification in commutative mode). Bunch shape untouched.
inline Bunch normalize_leaves(const Bunch& b, Mode mode) {
  switch (b.kind()) {
    case BKind::Leaf: return Bunch::leaf(normalize(b.formula(), mode));
    case BKind::MultUnit:
    case BKind::AddUnit: return b;
    default: {
      std::vector<Bunch> ch;
      ch.reserve(b.children().size());
      for (const auto& c : b.children()) ch.push_back(normalize_leaves(c, mode));
      return b.kind() == BKind::Comma ? Bunch::comma(std::move(ch)) : Bunch::semi(std::move(ch));
    }
  }
}

// Number of comma nodes on the deepest branch of the written tree. Sensitive
// to grouping: ((p,q),(r,s)) has depth 2 while (p,(q,(r,s))) has depth 3.
inline size_t bunch_depth(const Bunch& b) {
  switch (b.kind()) {
    case BKind::Leaf:
    case BKind::MultUnit:
    case BKind::AddUnit:
      return 0;
    case BKind::Comma:
    case BKind::Semi: {
      size_t m = 0;
      for (const auto& c : b.children()) m = std::max(m, bunch_depth(c));
      return b.kind() == BKind::Comma ? m + 1 : m;
    }
  }
  return 0;
}

// The hat translation: comma to *, semicolon to &, e* to unit, e+ to top.
// N-ary nodes fold to the left.
inline Formula bunch_to_formula(const Bunch& b) {
  switch (b.kind()) {
    case BKind::Leaf: return b.formula();
    case BKind::MultUnit: return Formula::one();
    case BKind::AddUnit: return Formula::top();
    case BKind::Comma:
    case BKind::Semi: {
      FKind op = b.kind() == BKind::Comma ? FKind::Star : FKind::And;
      Formula acc = bunch_to_formula(b.children()[0]);
      for (size_t i = 1; i < b.children().size(); ++i)
        acc = Formula::binary(op, acc, bunch_to_formula(b.children()[i]));
      return acc;
    }
  }
  return {};
}

inline Bunch substitute(const Bunch& b, const std::string& name, const Formula& g) {
  switch (b.kind()) {
    case BKind::Leaf: return Bunch::leaf(substitute(b.formula(), name, g));
    case BKind::MultUnit:
    case BKind::AddUnit: return b;
    default: {
      std::vector<Bunch> ch;
      ch.reserve(b.children().size());
      for (const auto& c : b.children()) ch.push_back(substitute(c, name, g));
      return b.kind() == BKind::Comma ? Bunch::comma(std::move(ch)) : Bunch::semi(std::move(ch));
    }
  }
}

inline void collect_atoms(const Bunch& b, std::set<std::string>& out) {
  if (b.kind() == BKind::Leaf) { collect_atoms(b.formula(), out); return; }
  if (b.kind() == BKind::Comma || b.kind() == BKind::Semi)
    for (const auto& c : b.children()) collect_atoms(c, out);
}

inline std::string to_text(const Bunch& b) {
  switch (b.kind()) {
    case BKind::Leaf: return to_text(b.formula());
    case BKind::MultUnit: return "e*";
    case BKind::AddUnit: return "e+";
    case BKind::Comma:
    case BKind::Semi: {
      const char* sep = b.kind() == BKind::Comma ? ", " : "; ";
      std::string out = "(";
      for (size_t i = 0; i < b.children().size(); ++i) {
        if (i) out += sep;
        out += to_text(b.children()[i]);
      }
      out += ')';
      return out;
    }
  }
  return {};
}

struct Sequent {
  Bunch antecedent;
  Formula succedent;
};

inline int compare(const Sequent& a, const Sequent& b) {
  int c = compare(a.antecedent, b.antecedent);
  return c != 0 ? c : compare(a.succedent, b.succedent);
}

inline bool operator==(const Sequent& a, const Sequent& b) { return compare(a, b) == 0; }
inline bool operator!=(const Sequent& a, const Sequent& b) { return compare(a, b) != 0; }

inline std::string to_text(const Sequent& s) {
  return to_text(s.antecedent) + " => " + to_text(s.succedent);
}

// Equality modulo the bunch congruence and connective identification.
inline Sequent canonical(const Sequent& s, Mode mode) {
  return {canonical(normalize_leaves(s.antecedent, mode), mode), normalize(s.succedent, mode)};
}

inline bool congruent(const Sequent& a, const Sequent& b, Mode mode) {
  Sequent ca = canonical(a, mode), cb = canonical(b, mode);
  return ca.antecedent == cb.antecedent && ca.succedent == cb.succedent;
}

}  // namespace biwb
