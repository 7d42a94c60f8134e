#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "biwb/truncated.hpp"

using namespace biwb;

namespace {

TileSet alternating_tiles() { return TileSet{{{1, 3, 2, 2}, {3, 1, 2, 2}}}; }

// The alternating set tiles the torus with period 1 x 2, rows swapping tile.
TileAssignment alternating_torus() {
  TileAssignment tau;
  tau.wrap = true;
  tau.width = 1;
  tau.height = 2;
  tau.cells = {0, 1};
  return tau;
}

TileSet lonely_tile() { return TileSet{{{1, 1, 1, 1}}}; }

TileAssignment lonely_torus() {
  TileAssignment tau;
  tau.wrap = true;
  tau.width = 1;
  tau.height = 1;
  tau.cells = {0};
  return tau;
}

void collect_subformulas(const Formula& f, std::set<std::string>& seen,
                         std::vector<Formula>& out) {
  if (!seen.insert(to_text(f)).second) return;
  out.push_back(f);
  switch (f.kind()) {
    case FKind::Neg:
      collect_subformulas(f.child(), seen, out);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Imp:
    case FKind::Star:
    case FKind::Wand:
    case FKind::Ldiv:
    case FKind::Rdiv:
      collect_subformulas(f.left(), seen, out);
      collect_subformulas(f.right(), seen, out);
      break;
    default:
      break;
  }
}

}  // namespace

TEST_CASE("the truncated model is the union frame over marked elements") {
  Model m = build_truncated_model(alternating_tiles(), alternating_torus(), 4);
  REQUIRE(m.frame.states == 256);
  REQUIRE(m.frame.neg_kind == NegKind::Complement);
  REQUIRE(m.frame.compose(1, 2) == StateSet::single(256, 3));
  REQUIRE(m.frame.compose(5, 5) == StateSet::single(256, 5));

  SECTION("the valuation follows the parity and edge tables") {
    REQUIRE(m.valuation.at("p").none());
    REQUIRE(m.valuation.at("oe").test(1));        // {0} has one even element
    REQUIRE_FALSE(m.valuation.at("ee").test(1));
    REQUIRE(m.valuation.at("ee").test(0));
    REQUIRE_FALSE(m.valuation.at("cc").test(0));
    REQUIRE(m.valuation.at("cc").test(2));
    StateSet marked_evens = StateSet::single(256, 1) | StateSet::single(256, 4) |
                            StateSet::single(256, 16) | StateSet::single(256, 64);
    REQUIRE(m.valuation.at("xx") == marked_evens);
    REQUIRE(m.valuation.at("yy").test(2));
    REQUIRE(m.valuation.at("yy").count() == 4);
    // the origin carries tile (1,3,2,2); one odd element moves a row up
    REQUIRE(m.valuation.at("u1").test(0));
    REQUIRE(m.valuation.at("d3").test(0));
    REQUIRE(m.valuation.at("l2").test(0));
    REQUIRE(m.valuation.at("r2").test(0));
    REQUIRE(m.valuation.at("u3").test(2));
    REQUIRE(m.valuation.at("d1").test(2));
  }
  SECTION("bad inputs are rejected") {
    TileAssignment flat = alternating_torus();
    flat.wrap = false;
    REQUIRE_THROWS_AS(build_truncated_model(alternating_tiles(), flat, 3), std::invalid_argument);
    TileAssignment torn = alternating_torus();
    torn.cells = {0, 0};  // tile 0 over itself breaks the vertical match
    REQUIRE_THROWS_AS(build_truncated_model(alternating_tiles(), torn, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(build_truncated_model(alternating_tiles(), alternating_torus(), 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(build_truncated_model(alternating_tiles(), alternating_torus(), 5),
                      std::invalid_argument);
  }
}

TEST_CASE("small truncations are sound frames") {
  for (size_t K = 1; K <= 3; ++K) {
    Model m = build_truncated_model(alternating_tiles(), alternating_torus(), K);
    REQUIRE(m.frame.states == (size_t(1) << (2 * K)));
    REQUIRE(validate_frame(m.frame).empty());
  }
  Model tiny = build_truncated_model(lonely_tile(), lonely_torus(), 1);
  REQUIRE_FALSE(complex_algebra_check(tiny.frame).has_value());
}

TEST_CASE("abstract atoms follow the valuation table") {
  TileSet w = alternating_tiles();
  TileAssignment tau = alternating_torus();
  auto at = [&](const char* name, size_t m, size_t n) {
    return eval_abstract(Formula::atom(name), {m, n}, w, tau, 4);
  };
  REQUIRE(at("ee", 0, 0));
  REQUIRE_FALSE(at("oe", 0, 0));
  REQUIRE(at("oe", 1, 0));
  REQUIRE(at("oo", 1, 1));
  REQUIRE(at("eo", 2, 1));
  REQUIRE(at("xx", 1, 0));
  REQUIRE_FALSE(at("xx", 1, 1));
  REQUIRE_FALSE(at("cc", 0, 0));
  REQUIRE(at("cc", 0, 2));
  REQUIRE_FALSE(at("p", 2, 2));
  REQUIRE(at("u1", 0, 0));
  REQUIRE(at("u3", 0, 1));
  REQUIRE(at("d1", 1, 1));

  SECTION("out of range points and foreign terms are errors") {
    REQUIRE_THROWS_AS(at("ee", 5, 0), EvalError);
    REQUIRE_THROWS_AS(at("zz", 0, 0), EvalError);
    REQUIRE_THROWS_AS(eval_abstract(compile_phi(w, Mode::NonCommutative), {0, 0}, w, tau, 4),
                      EvalError);
    REQUIRE_THROWS_AS(
        eval_abstract(Formula::imp(Formula::atom("ee"), Formula::atom("ee")), {0, 0}, w, tau, 4),
        EvalError);
  }
}

TEST_CASE("the corner formulas hold along the staircase abstraction") {
  TileSet w = alternating_tiles();
  TileAssignment tau = alternating_torus();
  detail::PhiParts parts = detail::phi_parts(w, Mode::NonCommutative);

  REQUIRE(eval_abstract(parts.a_oe, {1, 0}, w, tau, 4));
  REQUIRE(eval_abstract(parts.a_oo, {1, 1}, w, tau, 4));
  REQUIRE(eval_abstract(parts.a_eo, {2, 1}, w, tau, 4));
  REQUIRE(eval_abstract(parts.a_ee, {2, 2}, w, tau, 4));

  SECTION("the whole corner disjunction holds below the saturation boundary") {
    const size_t K = 4;
    for (size_t mm = 0; mm < K; ++mm)
      for (size_t nn = 0; nn < K; ++nn) REQUIRE(eval_abstract(parts.alpha, {mm, nn}, w, tau, K));
    // a saturated coordinate loses its fresh witness and the corner with it
    REQUIRE_FALSE(eval_abstract(parts.alpha, {K, 0}, w, tau, K));
  }
  SECTION("the start has its column witness") {
    Formula blocked = detail::under(parts.xp, parts.oe_c, Mode::NonCommutative);
    REQUIRE_FALSE(eval_abstract(blocked, {0, 0}, w, tau, 4));
    detail::PhiParts lone = detail::phi_parts(lonely_tile(), Mode::NonCommutative);
    Formula lone_blocked = detail::under(lone.xp, lone.oe_c, Mode::NonCommutative);
    REQUIRE_FALSE(eval_abstract(lone_blocked, {0, 0}, lonely_tile(), lonely_torus(), 4));
  }
  SECTION("a finite truncation cannot satisfy the full hypothesis bracket") {
    // the c-division in the bracket reaches saturated states where the
    // corner disjunction fails, so no state models it; the infinite grid
    // model has no such boundary
    REQUIRE_FALSE(eval_abstract(parts.bracket, {0, 0}, w, tau, 4));
    Model m = build_truncated_model(w, tau, 3);
    REQUIRE(eval(m, parts.bracket).none());
  }
}

TEST_CASE("abstraction agrees with the truncated model everywhere") {
  TileSet w = alternating_tiles();
  TileAssignment tau = alternating_torus();
  const size_t K = 3;
  Model m = build_truncated_model(w, tau, K);

  std::set<std::string> seen;
  std::vector<Formula> subs;
  collect_subformulas(compile_phi(w, Mode::NonCommutative), seen, subs);
  collect_subformulas(compile_phi(w, Mode::Commutative), seen, subs);
  REQUIRE(subs.size() > 80);

  std::vector<std::string> skipped;
  size_t compared = 0;
  for (const Formula& f : subs) {
    bool abstract_truth[4 + 1][4 + 1];
    try {
      for (size_t mm = 0; mm <= K; ++mm)
        for (size_t nn = 0; nn <= K; ++nn)
          abstract_truth[mm][nn] = eval_abstract(f, {mm, nn}, w, tau, K);
    } catch (const EvalError&) {
      skipped.push_back(to_text(f));
      continue;
    }
    StateSet sat = eval(m, f);
    for (size_t x = 0; x < m.frame.states; ++x) {
      size_t me = 0, mo = 0;
      for (size_t i = 0; i < 2 * K; ++i)
        if ((x >> i) & 1) ++(i % 2 ? mo : me);
      if (abstract_truth[me][mo] != sat.test(x)) {
        CAPTURE(to_text(f), x, me, mo);
        REQUIRE(abstract_truth[me][mo] == sat.test(x));
      }
      ++compared;
    }
  }
  // only the full compiled formulas lie outside the abstraction
  REQUIRE(skipped == std::vector<std::string>{to_text(compile_phi(w, Mode::NonCommutative)),
                                              to_text(compile_phi(w, Mode::Commutative))});
  REQUIRE(compared > 80 * 64);
}

TEST_CASE("extraction reads the tiling back off the truncated model") {
  TileSet w = alternating_tiles();
  TileAssignment tau = alternating_torus();
  Model m = build_truncated_model(w, tau, 4);

  TileAssignment out = extract_tiling(m, w, 0, 3);
  REQUIRE_FALSE(out.wrap);
  REQUIRE(out.width == 3);
  REQUIRE(out.height == 3);
  REQUIRE(out.cells == std::vector<size_t>{0, 0, 0, 1, 1, 1, 0, 0, 0});
  REQUIRE(assignment_valid(w, out));
  for (size_t j = 0; j < 3; ++j)
    for (size_t i = 0; i < 3; ++i) REQUIRE(out.cell(i, j) == tau.cell((1 + i) % 1, j % 2));

  SECTION("the start defaults to the lowest hypothesis state") {
    REQUIRE(extract_tiling(m, w, std::nullopt, 3).cells == out.cells);
  }
  SECTION("a single cell needs no adjacency") {
    TileAssignment one = extract_tiling(m, w, 0, 1);
    REQUIRE(one.cells == std::vector<size_t>{0});
  }
  SECTION("the saturated start has no fresh witness") {
    REQUIRE_THROWS_WITH(extract_tiling(m, w, 255, 3),
                        Catch::Matchers::ContainsSubstring("witness not found"));
  }
  SECTION("the probe budget is honoured") {
    REQUIRE_THROWS_WITH(extract_tiling(m, w, 0, 3, 2),
                        Catch::Matchers::ContainsSubstring("budget exhausted"));
  }
  SECTION("a grid outrunning the marked elements fails honestly") {
    REQUIRE_THROWS_WITH(extract_tiling(m, w, 0, 5),
                        Catch::Matchers::ContainsSubstring("witness not found"));
  }
  SECTION("a wider grid still fits at the bound") {
    TileAssignment wide = extract_tiling(m, w, 0, 4);
    REQUIRE(wide.cells == std::vector<size_t>{0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1});
  }
}

TEST_CASE("extraction invariants are forced by the literals") {
  TileSet w = alternating_tiles();
  TileAssignment tau = alternating_torus();
  Model m = build_truncated_model(w, tau, 3);

  SECTION("distinct tile literals never overlap") {
    const int k = w.colors();
    StateSet first = eval(m, tile_literal(w.tiles[0], k));
    StateSet second = eval(m, tile_literal(w.tiles[1], k));
    REQUIRE(first.any());
    REQUIRE(second.any());
    REQUIRE_FALSE(first.intersects(second));
  }
  SECTION("duplicate tiles resolve to the lowest index") {
    TileSet padded = w;
    padded.tiles.push_back(w.tiles[0]);
    TileAssignment out = extract_tiling(m, padded, 0, 2);
    REQUIRE(out.cells == std::vector<size_t>{0, 0, 1, 1});
  }
  SECTION("a vandalised edge letter leaves points tileless") {
    Model broken = m;
    broken.valuation["u1"] = StateSet(broken.frame.states);
    REQUIRE_THROWS_WITH(extract_tiling(broken, w, 0, 2),
                        Catch::Matchers::ContainsSubstring("no tile literal holds"));
  }
  SECTION("extraction works on a one tile world") {
    Model tiny = build_truncated_model(lonely_tile(), lonely_torus(), 3);
    TileAssignment out = extract_tiling(tiny, lonely_tile(), std::nullopt, 2);
    REQUIRE(out.cells == std::vector<size_t>{0, 0, 0, 0});
  }
}
