#include <catch2/catch_amalgamated.hpp>

#include "biwb/checker.hpp"
#include "biwb/growth.hpp"
#include "biwb/parse.hpp"
#include "biwb/seqgraph.hpp"

using namespace biwb;

namespace {

size_t ml(const std::string& s, Mode m = Mode::Commutative) {
  return multiplicative_length(parse_sequent(s, m), m);
}

}  // namespace

TEST_CASE("multiplicative length of flat and nested antecedents") {
  CHECK(ml("p, q, r => s") == 1);
  CHECK(ml("p, ((q, r); (q, r)) => s") == 2);
  CHECK(ml("p => q") == 0);
  CHECK(ml("p; q; r => s") == 0);
  // comma runs flatten before counting, so regrouping changes nothing
  CHECK(ml("(p, q), r => s") == 1);
  CHECK(ml("p, ((q, r); s) => t") == 2);
}

TEST_CASE("multiplicative length inside formulas follows polarity") {
  CHECK(ml("p * q => r") == 1);
  CHECK(ml("p * (q * r) => s") == 2);
  CHECK(ml("p -* q => r") == 0);       // wand is free in negative position
  CHECK(ml("p => q -* (q * r)") == 1); // star is free in positive position
  CHECK(ml("p => (p * p) -* q") == 2); // the argument side flips polarity
  CHECK(ml("p => ~(p * p)") == 1);
  CHECK(ml("p => (p * p) -> q") == 1); // additive implication flips too, but is unmarked
  CHECK(ml("e* => p -* q") == 1);
}

TEST_CASE("multiplicative length crosses from succedent root to antecedent") {
  CHECK(ml("(a, b) => p -* q") == 2);
  CHECK(ml("a, b => r & (p -* q)") == 1);  // the crossing edge leaves the root only
  CHECK(ml("((a, b); (c, d)), e => p -* q") == 3);
}

TEST_CASE("multiplicative length treats divisions as wands") {
  CHECK(ml("a, b => q / p", Mode::NonCommutative) == 2);
  CHECK(ml("a, b => p \\ q", Mode::NonCommutative) == 2);
  CHECK(ml("p \\ q => r", Mode::NonCommutative) == 0);
  CHECK(ml("a, b => q / p") == 2);
}

TEST_CASE("comma growth ladder checks with open side goals") {
  for (size_t n : {1u, 2u, 3u}) {
    Proof d = comma_growth_derivation(n);
    CHECK(d.conclusion() == growth_goal(0));
    auto vs = check_proof(d, Mode::Commutative, true);
    if (!vs.empty()) { INFO(vs[0].code << ": " << vs[0].detail); }
    CHECK(vs.empty());
    CHECK(inference_count(d) == 4 * n * n + 6 * n);

    size_t deepest = 0, at_top = 0;
    for (const auto& leaf : open_leaves(d)) {
      size_t dep = bunch_depth(leaf.antecedent);
      deepest = std::max(deepest, dep);
      if (leaf == growth_goal(2 * n)) at_top = dep;
    }
    CHECK(deepest == 2 * n);
    CHECK(at_top == 2 * n);
    CHECK(open_leaves(d).size() == 2 * n * n + 3 * n + 1);
  }
}

TEST_CASE("comma growth ladder details") {
  Proof d = comma_growth_derivation(1);
  CHECK(proof_depth(d) == 11);
  CHECK_FALSE(check_proof(d, Mode::Commutative, false).empty());  // honest about its gaps

  Proof d2 = comma_growth_derivation(2);
  CHECK(parse_proof(print_proof(d2), Mode::Commutative) == d2);
}
