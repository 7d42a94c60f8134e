#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "biwb/frames.hpp"

using namespace biwb;

namespace {

// Four states standing for the subsets of a two element carrier, composition
// is union of the bitmasks, negation is boolean complement.
Frame union_frame() {
  Frame f = Frame::empty(4);
  for (size_t x = 0; x < 4; ++x)
    for (size_t y = 0; y < 4; ++y) f.compose(x, y) = StateSet::single(4, x | y);
  f.neg_kind = NegKind::Complement;
  return f;
}

StateSet states_of(size_t n, std::initializer_list<size_t> xs) {
  StateSet s(n);
  for (size_t x : xs) s.set(x);
  return s;
}

// Independent bitmask evaluator over the powerset algebra tables. Builds its
// own product and residual tables from the frame, so agreement with eval is
// a genuine cross-check.
uint64_t alg_eval(const Frame& f, const std::map<std::string, uint64_t>& val,
                  const Formula& g) {
  const size_t n = f.states;
  auto dot = [&](uint64_t a, uint64_t b) {
    uint64_t acc = 0;
    for (size_t x = 0; x < n; ++x)
      if ((a >> x) & 1)
        for (size_t y = 0; y < n; ++y)
          if ((b >> y) & 1)
            for (size_t i : f.compose(x, y).members()) acc |= uint64_t(1) << i;
    return acc;
  };
  switch (g.kind()) {
    case FKind::Atom:
      return val.at(g.name());
    case FKind::And:
      return alg_eval(f, val, g.left()) & alg_eval(f, val, g.right());
    case FKind::Or:
      return alg_eval(f, val, g.left()) | alg_eval(f, val, g.right());
    case FKind::Neg: {
      uint64_t a = alg_eval(f, val, g.child());
      StateSet arg(n);
      for (size_t i = 0; i < n; ++i)
        if ((a >> i) & 1) arg.set(i);
      uint64_t out = 0;
      for (size_t i : f.negate(arg).members()) out |= uint64_t(1) << i;
      return out;
    }
    case FKind::Ldiv:
    case FKind::Wand: {
      uint64_t a = alg_eval(f, val, g.left()), b = alg_eval(f, val, g.right());
      uint64_t out = 0;
      for (size_t s = 0; s < n; ++s)
        if ((dot(a, uint64_t(1) << s) & ~b) == 0) out |= uint64_t(1) << s;
      return out;
    }
    case FKind::Rdiv: {
      uint64_t a = alg_eval(f, val, g.left()), b = alg_eval(f, val, g.right());
      uint64_t out = 0;
      for (size_t s = 0; s < n; ++s)
        if ((dot(uint64_t(1) << s, b) & ~a) == 0) out |= uint64_t(1) << s;
      return out;
    }
    default:
      throw std::logic_error("outside the fragment");
  }
}

uint64_t mask_of(const StateSet& s) {
  uint64_t m = 0;
  for (size_t i : s.members()) m |= uint64_t(1) << i;
  return m;
}

std::vector<Frame> associative_two_state_frames() {
  std::vector<Frame> out;
  std::vector<size_t> digits(4, 0);
  do {
    Frame f = detail::frame_from_digits(2, digits);
    if (detail::frame_associative(f)) out.push_back(f);
  } while (detail::next_digits(digits, 4));
  return out;
}

}  // namespace

TEST_CASE("state sets behave like finite subsets") {
  StateSet s(70);
  REQUIRE(s.none());
  s.set(0);
  s.set(69);
  REQUIRE(s.count() == 2);
  REQUIRE(s.test(69));
  REQUIRE_FALSE(s.test(33));
  REQUIRE(s.members() == std::vector<size_t>{0, 69});
  REQUIRE(s.complement().count() == 68);
  REQUIRE_FALSE(s.intersects(s.complement()));
  REQUIRE((s | s.complement()) == StateSet::all(70));
  REQUIRE(StateSet::single(70, 0).subset_of(s));
  REQUIRE_FALSE(s.subset_of(StateSet::single(70, 0)));
  REQUIRE(StateSet(70) < s);
  REQUIRE(StateSet(3) != StateSet(4));
}

TEST_CASE("a one point frame with empty composition validates") {
  Frame f = Frame::empty(1);
  REQUIRE(validate_frame(f).empty());

  SECTION("a negation image meeting its argument is flagged") {
    f.neg[StateSet::single(1, 0)] = StateSet::single(1, 0);
    auto bad = validate_frame(f);
    REQUIRE(bad.size() == 1);
    REQUIRE(bad[0].find("negation image meets its argument") != std::string::npos);
  }
  SECTION("a composition image over the wrong carrier is flagged") {
    f.comp[0] = StateSet(3);
    REQUIRE_FALSE(validate_frame(f).empty());
  }
}

TEST_CASE("the union frame validates and evaluates the fragment") {
  Model m;
  m.frame = union_frame();
  m.valuation["p"] = states_of(4, {1});
  REQUIRE(validate_frame(m.frame).empty());

  REQUIRE(eval(m, Formula::neg(Formula::atom("p"))) == states_of(4, {0, 2, 3}));
  REQUIRE(eval(m, Formula::conj(Formula::atom("p"), Formula::neg(Formula::atom("p")))).none());

  SECTION("the empty state divides p by itself") {
    StateSet sat = eval(m, Formula::ldiv(Formula::atom("p"), Formula::atom("p")));
    REQUIRE(sat.test(0));
    REQUIRE_FALSE(sat.test(2));
  }
  SECTION("division quantifies over unions with the divisor") {
    m.valuation["q"] = states_of(4, {1, 3});
    StateSet sat = eval(m, Formula::ldiv(Formula::atom("p"), Formula::atom("q")));
    REQUIRE(sat == StateSet::all(4));
    StateSet rsat = eval(m, Formula::rdiv(Formula::atom("q"), Formula::atom("p")));
    REQUIRE(rsat == StateSet::all(4));
  }
  SECTION("wand reads as left division") {
    REQUIRE(eval(m, Formula::wand(Formula::atom("p"), Formula::atom("p"))) ==
            eval(m, Formula::ldiv(Formula::atom("p"), Formula::atom("p"))));
  }
  SECTION("connectives outside the fragment are rejected") {
    REQUIRE_THROWS_AS(eval(m, Formula::imp(Formula::atom("p"), Formula::atom("p"))), EvalError);
    REQUIRE_THROWS_AS(eval(m, Formula::star(Formula::atom("p"), Formula::atom("p"))), EvalError);
    REQUIRE_THROWS_AS(eval(m, Formula::top()), EvalError);
    REQUIRE_THROWS_AS(eval(m, Formula::one()), EvalError);
    REQUIRE_THROWS_AS(eval(m, Formula::atom("missing")), EvalError);
  }
}

TEST_CASE("conjoined negation is empty in every model") {
  std::mt19937 rng(20240819);
  Formula clash = Formula::conj(Formula::atom("p"), Formula::neg(Formula::atom("p")));
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 1 + rng() % 4;
    Model m;
    m.frame = Frame::empty(n);
    for (StateSet& img : m.frame.comp)
      for (size_t i = 0; i < n; ++i)
        if (rng() % 2) img.set(i);
    StateSet v(n);
    for (size_t i = 0; i < n; ++i)
      if (rng() % 2) v.set(i);
    m.valuation["p"] = v;
    StateSet image(n);
    for (size_t i = 0; i < n; ++i)
      if (!v.test(i) && rng() % 2) image.set(i);
    m.frame.neg[v] = image;
    REQUIRE(validate_frame(m.frame).size() ==
            validate_frame(m.frame).size());  // validation is pure
    REQUIRE(eval(m, clash).none());
  }
}

TEST_CASE("the powerset algebra laws hold on validated frames") {
  auto frames = associative_two_state_frames();
  REQUIRE(frames.size() > 30);
  for (const Frame& f : frames) REQUIRE_FALSE(complex_algebra_check(f).has_value());

  SECTION("the union frame passes as well") {
    REQUIRE_FALSE(complex_algebra_check(union_frame()).has_value());
  }
  SECTION("three state frames pass when associative") {
    std::mt19937 rng(20240819);
    int seen = 0;
    while (seen < 40) {
      Frame f = Frame::empty(3);
      for (StateSet& img : f.comp)
        if (rng() % 3 == 0) img.set(rng() % 3);
      if (!validate_frame(f).empty()) continue;
      REQUIRE_FALSE(complex_algebra_check(f).has_value());
      ++seen;
    }
  }
}

TEST_CASE("a non associative table breaks the semigroup law") {
  Frame f = Frame::empty(2);
  f.compose(0, 0) = StateSet::single(2, 1);
  f.compose(0, 1) = StateSet::single(2, 0);
  REQUIRE_FALSE(validate_frame(f).empty());
  auto why = complex_algebra_check(f);
  REQUIRE(why.has_value());
  REQUIRE(why->find("semigroup") != std::string::npos);
}

TEST_CASE("the powerset check refuses large carriers") {
  REQUIRE_THROWS_AS(complex_algebra_check(Frame::empty(9)), std::invalid_argument);
}

TEST_CASE("algebra tables agree with the frame clauses") {
  std::vector<Formula> probes = {
      parse_formula("p \\ p", Mode::NonCommutative),
      parse_formula("q / p", Mode::NonCommutative),
      parse_formula("~p", Mode::NonCommutative),
      parse_formula("p & (q | ~p)", Mode::NonCommutative),
      parse_formula("(p | q) \\ (p & q)", Mode::NonCommutative),
      parse_formula("~(p \\ q) / q", Mode::NonCommutative),
  };
  for (Frame base : associative_two_state_frames()) {
    for (int neg_complement = 0; neg_complement < 2; ++neg_complement) {
      Frame f = base;
      f.neg_kind = neg_complement ? NegKind::Complement : NegKind::Sparse;
      for (uint64_t vp = 0; vp < 4; ++vp)
        for (uint64_t vq = 0; vq < 4; ++vq) {
          Model m;
          m.frame = f;
          m.valuation["p"] = states_of(2, {});
          m.valuation["q"] = states_of(2, {});
          for (size_t i = 0; i < 2; ++i) {
            if ((vp >> i) & 1) m.valuation["p"].set(i);
            if ((vq >> i) & 1) m.valuation["q"].set(i);
          }
          std::map<std::string, uint64_t> val{{"p", vp}, {"q", vq}};
          for (const Formula& g : probes)
            REQUIRE(mask_of(eval(m, g)) == alg_eval(f, val, g));
        }
    }
  }
}

TEST_CASE("refuting the excluded middle needs one point") {
  Formula f = parse_formula("p | ~p");
  CountermodelResult r = countermodel_search(f, 2);
  REQUIRE(r.model.has_value());
  REQUIRE_FALSE(r.exhausted);
  REQUIRE(r.examined == 1);
  const Model& m = *r.model;
  REQUIRE(m.frame.states == 1);
  REQUIRE(m.frame.compose(0, 0).none());
  REQUIRE(m.valuation.at("p").none());
  REQUIRE(m.frame.neg.at(StateSet(1)).none());
  REQUIRE(eval(m, f) != StateSet::all(1));
  REQUIRE(validate_frame(m.frame).empty());
}

TEST_CASE("refuting self division needs two points") {
  Formula f = parse_formula("p \\ p", Mode::NonCommutative);
  CountermodelResult r = countermodel_search(f, 2);
  REQUIRE(r.model.has_value());
  REQUIRE(r.examined == 4);
  const Model& m = *r.model;
  REQUIRE(m.frame.states == 2);
  REQUIRE(m.frame.compose(1, 1) == states_of(2, {0}));
  REQUIRE(m.frame.compose(0, 0).none());
  REQUIRE(m.frame.compose(0, 1).none());
  REQUIRE(m.frame.compose(1, 0).none());
  REQUIRE(m.valuation.at("p") == states_of(2, {1}));
  REQUIRE(m.frame.neg.empty());
  REQUIRE(eval(m, f) == states_of(2, {0}));
  REQUIRE(validate_frame(m.frame).empty());

  SECTION("one point is honestly exhausted first") {
    CountermodelResult small = countermodel_search(f, 1);
    REQUIRE_FALSE(small.model.has_value());
    REQUIRE(small.exhausted);
    REQUIRE(small.examined == 2);
  }
  SECTION("the budget caps the table count") {
    CountermodelResult cut = countermodel_search(f, 2, 3);
    REQUIRE_FALSE(cut.model.has_value());
    REQUIRE_FALSE(cut.exhausted);
    REQUIRE(cut.examined == 3);
    CountermodelResult enough = countermodel_search(f, 2, 4);
    REQUIRE(enough.model.has_value());
    REQUIRE(enough.examined == 4);
  }
  SECTION("the answer does not depend on the worker count") {
    for (size_t workers : {2, 3, 5}) {
      CountermodelResult w = countermodel_search(f, 2, size_t(-1), workers);
      REQUIRE(w.model.has_value());
      REQUIRE(w.examined == r.examined);
      REQUIRE(w.model->frame.comp == m.frame.comp);
      REQUIRE(w.model->valuation.at("p") == m.valuation.at("p"));
    }
  }
}

TEST_CASE("countermodels satisfy the search contract on other shapes") {
  Formula conj_clash = parse_formula("p & ~p");
  CountermodelResult r = countermodel_search(conj_clash, 1);
  REQUIRE(r.model.has_value());
  REQUIRE(r.model->frame.states == 1);
  REQUIRE(eval(*r.model, conj_clash).none());
}

TEST_CASE("models print and parse back") {
  Formula f = parse_formula("p \\ p", Mode::NonCommutative);
  Model m = *countermodel_search(f, 2).model;
  std::string text = print_model(m);
  REQUIRE(text == "states 2\ncomp 1 1 : 0\nval p : 1\n");
  Model back = parse_model(text);
  REQUIRE(back.frame.states == 2);
  REQUIRE(back.frame.comp == m.frame.comp);
  REQUIRE(back.valuation == m.valuation);
  REQUIRE(eval(back, f) == eval(m, f));

  SECTION("empty valuations survive the trip") {
    Model simple = *countermodel_search(parse_formula("p | ~p"), 1).model;
    std::string t = print_model(simple);
    REQUIRE(t == "states 1\nval p :\n");
    REQUIRE(parse_model(t).valuation.at("p").none());
  }
  SECTION("the complement marker survives the trip") {
    Model u;
    u.frame = union_frame();
    u.valuation["p"] = states_of(4, {1});
    std::string t = print_model(u);
    REQUIRE(t.find("neg complement\n") != std::string::npos);
    Model back_u = parse_model(t);
    REQUIRE(back_u.frame.neg_kind == NegKind::Complement);
    REQUIRE(eval(back_u, Formula::neg(Formula::atom("p"))) == states_of(4, {0, 2, 3}));
  }
  SECTION("sparse negation entries print braced") {
    Frame fr = Frame::empty(2);
    fr.neg[states_of(2, {0})] = states_of(2, {1});
    std::string t = print_frame(fr);
    REQUIRE(t == "states 2\nneg {0} : {1}\n");
    Frame back_fr = parse_frame(t);
    REQUIRE(back_fr.neg.at(states_of(2, {0})) == states_of(2, {1}));
  }
}

TEST_CASE("frame files accept comments and reject malformed lines") {
  Model m = parse_model("# two points\nstates 2\n\ncomp 0 1 : 1 # tail note\nval p : 0 1\n");
  REQUIRE(m.frame.compose(0, 1) == states_of(2, {1}));
  REQUIRE(m.valuation.at("p") == StateSet::all(2));

  auto line_of = [](const std::string& text) {
    try {
      parse_model(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return size_t(0);
  };
  REQUIRE(line_of("states 2\ncomp 0 3 : 0\n") == 2);
  REQUIRE(line_of("states 2\ncomp 0 0 0\n") == 2);
  REQUIRE(line_of("states 2\nneg {0} {1}\n") == 2);
  REQUIRE(line_of("states 2\nneg {a} : {}\n") == 2);
  REQUIRE(line_of("states 2\nval p : x\n") == 2);
  REQUIRE(line_of("states 2\nstates 2\n") == 2);
  REQUIRE(line_of("states 0\n") == 1);
  REQUIRE(line_of("comp 0 0 : 0\n") == 1);
  REQUIRE(line_of("states 2\nmystery 1\n") == 2);
  REQUIRE_THROWS_AS(parse_model("# nothing\n"), ParseError);
}
