#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "biwb/acm.hpp"
#include "biwb/checker.hpp"
#include "biwb/parse.hpp"
#include "helpers.hpp"

using namespace biwb;

namespace {

const char* kDecMachine = R"(# one decrement to the final state
states q0 qf
final qf
registers 1
dec q0 qf 1
)";

const char* kForkMachine = R"(states q0 qf
final qf
registers 0
fork q0 qf qf
)";

const char* kLoopMachine = R"(states q0 q1 qf
final qf
registers 2
inc q0 q1 1
dec q1 qf 1
)";

Proof checked(const Machine& m, const Configuration& c, size_t budget = 6) {
  auto tree = accepts_bounded(m, c, budget);
  REQUIRE(tree);
  REQUIRE(tree_valid(m, *tree));
  Proof p = soundness_proof(m, *tree);
  auto vs = check_proof(p, Mode::Commutative);
  if (!vs.empty()) { INFO(vs[0].code << ": " << vs[0].detail); }
  REQUIRE(vs.empty());
  CHECK(canonical(p.conclusion(), Mode::Commutative) ==
        canonical(config_sequent(m, c), Mode::Commutative));
  return p;
}

}  // namespace

TEST_CASE("machine text parsing") {
  Machine m = parse_machine(kDecMachine);
  CHECK(m.states == std::vector<std::string>{"q0", "qf"});
  CHECK(m.final == "qf");
  CHECK(m.registers == 1);
  REQUIRE(m.instructions.size() == 1);
  CHECK(m.instructions[0].kind == InstrKind::Decrement);
  CHECK(m.instructions[0].from == "q0");
  CHECK(m.instructions[0].to == "qf");
  CHECK(m.instructions[0].reg == 1);

  CHECK_THROWS_AS(parse_machine("states q0\nfinal q0\nregisters 1\njump q0 q0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states q0\nfinal qf\nregisters 0\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states q0 qf\nfinal qf\nregisters 1\ninc q0 q2 1\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states q0 qf\nfinal qf\nregisters 1\ninc q0 qf 2\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states q0 qf\nfinal qf\nregisters 1\ninc q0 qf 0\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states r1 qf\nfinal qf\nregisters 1\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states q0 qf\nfinal qf\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states q0 qf\nfinal qf\nregisters 1\ndec q0 qf 1 9\n"), ParseError);
}

TEST_CASE("bounded acceptance search") {
  Machine dec = parse_machine(kDecMachine);
  auto t = accepts_bounded(dec, {"q0", {1}}, 6);
  REQUIRE(t);
  CHECK(tree_valid(dec, *t));
  CHECK(t->instruction == 0);
  REQUIRE(t->children.size() == 1);
  CHECK(t->children[0].config == Configuration{"qf", {0}});
  CHECK(t->children[0].children.empty());

  CHECK_FALSE(accepts_bounded(dec, {"q0", {0}}, 8));
  CHECK_FALSE(accepts_bounded(dec, {"q0", {2}}, 8));

  Machine fork = parse_machine(kForkMachine);
  auto f = accepts_bounded(fork, {"q0", {}}, 6);
  REQUIRE(f);
  CHECK(tree_valid(fork, *f));
  REQUIRE(f->children.size() == 2);
  CHECK(is_accepting(fork, f->children[0].config));
  CHECK(is_accepting(fork, f->children[1].config));

  Machine loop = parse_machine(kLoopMachine);
  auto l = accepts_bounded(loop, {"q0", {0, 0}}, 6);
  REQUIRE(l);
  CHECK(l->instruction == 0);
  REQUIRE(l->children.size() == 1);
  CHECK(l->children[0].config == Configuration{"q1", {1, 0}});
  CHECK_FALSE(accepts_bounded(loop, {"q0", {0, 1}}, 6));  // second register never drains

  // two equally short witnesses: the listed order decides
  Machine twin = parse_machine("states q0 qf\nfinal qf\nregisters 0\nfork q0 qf qf\nfork q0 qf qf\n");
  auto w = accepts_bounded(twin, {"q0", {}}, 6);
  REQUIRE(w);
  CHECK(w->instruction == 0);
}

TEST_CASE("tree replay rejects mangled trees") {
  Machine dec = parse_machine(kDecMachine);
  auto t = accepts_bounded(dec, {"q0", {1}}, 6);
  REQUIRE(t);
  ComputationTree bad = *t;
  bad.children[0].config.counts[0] = 1;  // decrement must drop the counter
  CHECK_FALSE(tree_valid(dec, bad));
  ComputationTree leafy = *t;
  leafy.children.clear();
  leafy.instruction.reset();  // root is not accepting, so no leaf allowed
  CHECK_FALSE(tree_valid(dec, leafy));
}

TEST_CASE("machine encoding shapes") {
  Machine dec = parse_machine(kDecMachine);
  Encoding e = encode(dec, Mode::Commutative);
  Formula q0 = Formula::atom("q0"), qf = Formula::atom("qf"), r1 = Formula::atom("r1");
  CHECK(e.i == Formula::wand(Formula::star(q0, r1), qf));
  CHECK(e.t == Formula::imp(Formula::wand(e.i, qf), qf));
  CHECK(e.theta == Formula::conj(Formula::wand(Formula::top(), e.t), Formula::one()));
  CHECK(e.theta.kind() == FKind::And);
  CHECK(e.theta.right().kind() == FKind::One);

  Encoding n = encode(dec, Mode::NonCommutative);
  CHECK(n.i == Formula::rdiv(qf, Formula::star(q0, r1)));
  CHECK(n.t == Formula::imp(Formula::ldiv(n.i, qf), qf));
  CHECK(n.theta == Formula::conj(Formula::ldiv(Formula::top(), n.t), Formula::one()));

  Machine loop = parse_machine(kLoopMachine);
  Encoding le = encode(loop, Mode::Commutative);
  CHECK(le.i.kind() == FKind::And);  // two instructions fold into one conjunction
  CHECK(le.i.left() == Formula::wand(Formula::atom("q0"), Formula::star(Formula::atom("q1"), r1)));
  CHECK(le.i.right() == Formula::wand(Formula::star(Formula::atom("q1"), r1), qf));

  Machine three = parse_machine(
      "states q0 qf\nfinal qf\nregisters 1\ninc q0 q0 1\ndec q0 qf 1\nfork q0 q0 qf\n");
  Encoding t3 = encode(three, Mode::Commutative);
  CHECK(t3.i.kind() == FKind::And);
  CHECK(t3.i.left().kind() == FKind::And);  // left fold: (f1 & f2) & f3
  CHECK(t3.i.right() == Formula::wand(q0, Formula::disj(q0, qf)));
}

TEST_CASE("configuration sequent") {
  Machine dec = parse_machine(kDecMachine);
  Sequent s = config_sequent(dec, {"q0", {2}});
  REQUIRE(s.antecedent.kind() == BKind::Comma);
  REQUIRE(s.antecedent.children().size() == 4);
  CHECK(s.antecedent.children()[0] == Bunch::leaf(Formula::atom("q0")));
  CHECK(s.antecedent.children()[1] == Bunch::leaf(Formula::atom("r1")));
  CHECK(s.antecedent.children()[3] == Bunch::leaf(encode(dec, Mode::Commutative).theta));
  CHECK(s.succedent == Formula::atom("qf"));
}

TEST_CASE("base gadget matches the displayed derivation") {
  Machine dec = parse_machine(kDecMachine);
  Proof g = gadget_proof(GadgetKind::Base, dec, {"qf", {0}});
  CHECK(check_proof(g, Mode::Commutative).empty());
  CHECK(g.conclusion() == config_sequent(dec, {"qf", {0}}));
  CHECK(g.tag() == RuleTag::AndL);
  CHECK(proof_size(g) == 5);

  CHECK_THROWS_AS(gadget_proof(GadgetKind::Base, dec, Configuration{"q0", {0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gadget_proof(GadgetKind::Base, dec, Configuration{"qf", {1}}),
                  std::invalid_argument);
}

TEST_CASE("decrement machine proof replays the displayed gadget") {
  Machine dec = parse_machine(kDecMachine);
  Proof p = checked(dec, {"q0", {1}});
  CHECK(p.tag() == RuleTag::C);
  CHECK(p.conclusion() == config_sequent(dec, {"q0", {1}}));
  CHECK(proof_size(p) == 18);
  CHECK(parse_proof(print_proof(p), Mode::Commutative) == p);
}

TEST_CASE("fork machine proof assembles two base subproofs") {
  Machine fork = parse_machine(kForkMachine);
  Proof p = checked(fork, {"q0", {}});
  CHECK(proof_size(p) == 22);
}

TEST_CASE("increment and multi-instruction trunk") {
  Machine loop = parse_machine(kLoopMachine);
  checked(loop, {"q0", {0, 0}});
  checked(loop, {"q1", {1, 0}});

  Machine drain = parse_machine(
      "states q0 q1 qf\nfinal qf\nregisters 2\ninc q0 q1 1\ndec q1 q1 1\nfork q1 qf qf\n");
  checked(drain, {"q1", {3, 0}}, 8);  // three decrements, then the fork closes
  checked(drain, {"q0", {2, 0}}, 8);
}

TEST_CASE("gadget rejects bad arguments") {
  Machine dec = parse_machine(kDecMachine);
  Proof base = gadget_proof(GadgetKind::Base, dec, {"qf", {0}});
  CHECK_THROWS_AS(gadget_proof(GadgetKind::Increment, dec, Configuration{"q0", {1}}, {base}, 0),
                  std::invalid_argument);  // kind does not match the instruction
  CHECK_THROWS_AS(gadget_proof(GadgetKind::Decrement, dec, Configuration{"q0", {0}}, {base}, 0),
                  std::invalid_argument);  // counter empty
  CHECK_THROWS_AS(gadget_proof(GadgetKind::Decrement, dec, Configuration{"q0", {2}}, {base}, 0),
                  std::invalid_argument);  // subproof proves the wrong sequent
  CHECK_THROWS_AS(gadget_proof(GadgetKind::Decrement, dec, Configuration{"q0", {1}}, {}, 0),
                  std::invalid_argument);  // missing subproof
  CHECK_THROWS_AS(gadget_proof(GadgetKind::Decrement, dec, Configuration{"q0", {1}}, {base}, 3),
                  std::invalid_argument);  // no such instruction
}

TEST_CASE("random machines round-trip through the checker") {
  std::mt19937 rng(20240817);
  size_t machines = 30, stepped = 0;
  for (size_t i = 0; i < machines; ++i) {
    Machine m = testgen::random_machine(rng);
    for (const auto& c : testgen::all_configurations(m, 3)) {
      auto tree = accepts_bounded(m, c, 6);
      if (!tree) continue;
      REQUIRE(tree_valid(m, *tree));
      Proof p = soundness_proof(m, *tree);
      auto vs = check_proof(p, Mode::Commutative);
      if (!vs.empty()) { INFO(to_text(p.conclusion()) << " : " << vs[0].code << ": " << vs[0].detail); }
      REQUIRE(vs.empty());
      REQUIRE(canonical(p.conclusion(), Mode::Commutative) ==
              canonical(config_sequent(m, c), Mode::Commutative));
      if (tree->instruction) ++stepped;
    }
  }
  CHECK(stepped >= 25);  // the harvest must include real multi-step runs
}
