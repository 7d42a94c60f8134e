#pragma once
// Multiplicative length of a sequent: the largest number of multiplicative
// marks on one directed path through the sequent's structure graph. The
// graph has a node per bunch position of the canonical antecedent and per
// formula occurrence, edges from each node to its immediate parts, and one
// edge from the succedent root to the antecedent root. A node is marked
// when it is a comma or * in negative position, or a wand / division in
// positive position; polarity starts positive at the succedent, negative on
// the antecedent, and flips through negation and the argument side of every
// implication-like connective.

#include <algorithm>
#include <cstddef>

#include "bunch.hpp"
#include "formula.hpp"

namespace biwb {

namespace detail {

struct MultLen {
  size_t best = 0;  // best path from any start node

  // cont is the best continuation past this node; nonzero only for the
  // succedent root, whose path may cross into the antecedent.
  size_t formula(const Formula& f, bool positive, size_t cont = 0) {
    size_t w = 0, sub = 0;
    switch (f.kind()) {
      case FKind::Star:
        w = positive ? 0 : 1;
        sub = std::max(formula(f.left(), positive), formula(f.right(), positive));
        break;
      case FKind::Wand:
      case FKind::Ldiv:
        w = positive ? 1 : 0;
        sub = std::max(formula(f.left(), !positive), formula(f.right(), positive));
        break;
      case FKind::Rdiv:
        w = positive ? 1 : 0;
        sub = std::max(formula(f.left(), positive), formula(f.right(), !positive));
        break;
      case FKind::Imp:
        sub = std::max(formula(f.left(), !positive), formula(f.right(), positive));
        break;
      case FKind::And:
      case FKind::Or:
        sub = std::max(formula(f.left(), positive), formula(f.right(), positive));
        break;
      case FKind::Neg:
        sub = formula(f.child(), !positive);
        break;
      default:
        break;
    }
    size_t here = w + std::max(sub, cont);
    best = std::max(best, here);
    return here;
  }

  size_t bunch(const Bunch& b) {
    size_t w = 0, sub = 0;
    switch (b.kind()) {
      case BKind::Leaf:
        sub = formula(b.formula(), false);
        break;
      case BKind::Comma:
        w = 1;
        [[fallthrough]];
      case BKind::Semi:
        for (const auto& c : b.children()) sub = std::max(sub, bunch(c));
        break;
      default:
        break;
    }
    size_t here = w + sub;
    best = std::max(best, here);
    return here;
  }
};

}  // namespace detail

inline size_t multiplicative_length(const Sequent& s, Mode mode = Mode::Commutative) {
  Sequent c = canonical(s, mode);
  detail::MultLen m;
  size_t ante = m.bunch(c.antecedent);
  m.formula(c.succedent, true, ante);
  return m.best;
}

}  // namespace biwb
