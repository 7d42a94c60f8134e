#pragma once
// A family of partial derivations whose bunches nest deeper and deeper: no
// function of the endsequent bounds the comma depth a derivation may need.
// Fix x := s -* unit, G := (x -* q) -> c and F := a -* G, and write D_i for
// the right-nested bunch (x, (x, ... (x, F))) with i x's. One round turns
// the goal D_i => q into D_{i+1} => q:
//
//   duplicate D_i with a contraction, burn the x's of the first copy down
//   to F (each x yields a unit against an open side goal e* => s), turn F
//   into G against an open side goal e* => a, then feed the untouched
//   second copy to G's implication, whose minor premise D_i => x -* q
//   closes under -*R by prepending a fresh x.
//
// The round costs 2i + 4 inferences, so 2n rounds reach nesting depth 2n in
// 4n^2 + 6n inferences while every displayed sequent stays small.

#include <vector>

#include "bunch.hpp"
#include "formula.hpp"
#include "proof.hpp"

namespace biwb {

inline Formula growth_x() { return Formula::wand(Formula::atom("s"), Formula::one()); }
inline Formula growth_g() {
  return Formula::imp(Formula::wand(growth_x(), Formula::atom("q")), Formula::atom("c"));
}
inline Formula growth_f() { return Formula::wand(Formula::atom("a"), growth_g()); }

// D_i: i x's nested to the right onto F.
inline Bunch growth_bunch(size_t i) {
  Bunch b = Bunch::leaf(growth_f());
  for (size_t k = 0; k < i; ++k) b = Bunch::comma(Bunch::leaf(growth_x()), b);
  return b;
}

inline Sequent growth_goal(size_t i) { return {growth_bunch(i), Formula::atom("q")}; }

namespace detail {

inline Proof growth_round(size_t i, size_t last) {
  Formula q = Formula::atom("q");
  if (i == last) return Proof::make(RuleTag::Open, growth_goal(i));

  Bunch d = growth_bunch(i);
  Proof above = growth_round(i + 1, last);
  Proof wr = Proof::make(RuleTag::WandR, {d, Formula::wand(growth_x(), q)}, {std::move(above)});
  Proof il = Proof::make(RuleTag::ImpL, {Bunch::semi(Bunch::leaf(growth_g()), d), q},
                         {std::move(wr), Proof::make(RuleTag::Open, {Bunch::leaf(Formula::atom("c")), q})},
                         Path{0});
  Proof cur = Proof::make(RuleTag::WandL, {Bunch::semi(Bunch::leaf(growth_f()), d), q},
                          {Proof::make(RuleTag::Open, {Bunch::mult_unit(), Formula::atom("a")}),
                           std::move(il)},
                          Path{0});
  for (size_t k = 1; k <= i; ++k) {
    Bunch burnt = Bunch::comma(Bunch::leaf(Formula::one()), growth_bunch(k - 1));
    Proof ol = Proof::make(RuleTag::OneL, {Bunch::semi(burnt, d), q}, {std::move(cur)}, Path{0, 0});
    cur = Proof::make(RuleTag::WandL, {Bunch::semi(growth_bunch(k), d), q},
                      {Proof::make(RuleTag::Open, {Bunch::mult_unit(), Formula::atom("s")}),
                       std::move(ol)},
                      Path{0, 1});
  }
  return Proof::make(RuleTag::C, growth_goal(i), {std::move(cur)}, Path{}, d);
}

}  // namespace detail

// 2n rounds starting from F => q. The single deepest open leaf is the goal
// D_{2n} => q, whose antecedent has comma depth 2n.
inline Proof comma_growth_derivation(size_t n) { return detail::growth_round(0, 2 * n); }

inline size_t inference_count(const Proof& p) {
  size_t n = p.tag() == RuleTag::Open ? 0 : 1;
  for (const auto& q : p.premises()) n += inference_count(q);
  return n;
}

}  // namespace biwb
