#pragma once
// And-branching counter machines: a machine is a finite set of states, k
// counters holding naturals, and instructions that increment, decrement, or
// fork. A fork spawns two branches and every branch must reach the final
// state with all counters zero, so acceptance is witnessed by a finite tree.
//
// Machines translate to formulas over the state and register atoms:
//   increment  q -* (q' * r_i)
//   decrement  (q * r_i) -* q'
//   fork       q -* (q' | q'')
// with i the conjunction of all instructions, t := (i -* q_f) -> q_f and
// theta := (top -* t) & 1 (division forms replace -* in ordered mode).
// An accepted configuration (q, R) yields a checked derivation of
// q, R, theta => q_f built from one proof gadget per computation step.

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bunch.hpp"
#include "checker.hpp"
#include "formula.hpp"
#include "parse.hpp"
#include "proof.hpp"

namespace biwb {

enum class InstrKind { Increment, Decrement, Fork };

struct Instruction {
  InstrKind kind;
  std::string from, to, to2;  // to2 is the second fork target
  size_t reg = 0;             // 1-based, increment/decrement only
};

struct Machine {
  std::vector<std::string> states;
  std::string final;
  size_t registers = 0;
  std::vector<Instruction> instructions;
};

struct Configuration {
  std::string state;
  std::vector<size_t> counts;  // one per register
};

inline bool operator==(const Configuration& a, const Configuration& b) {
  return a.state == b.state && a.counts == b.counts;
}

// One tree node per machine step; leaves carry no instruction.
struct ComputationTree {
  Configuration config;
  std::optional<size_t> instruction;  // index into the machine's list
  std::vector<ComputationTree> children;
};

inline std::string register_atom(size_t i) { return "r" + std::to_string(i); }

inline bool is_accepting(const Machine& m, const Configuration& c) {
  if (c.state != m.final) return false;
  for (size_t n : c.counts) if (n != 0) return false;
  return true;
}

// Child configurations of applying one instruction, empty when it does not
// apply. Forks list the first target before the second.
inline std::vector<Configuration> apply_instruction(const Machine& m, size_t idx,
                                                    const Configuration& c) {
  const Instruction& ins = m.instructions[idx];
  if (c.state != ins.from) return {};
  switch (ins.kind) {
    case InstrKind::Increment: {
      Configuration d{ins.to, c.counts};
      d.counts[ins.reg - 1] += 1;
      return {std::move(d)};
    }
    case InstrKind::Decrement: {
      if (c.counts[ins.reg - 1] == 0) return {};
      Configuration d{ins.to, c.counts};
      d.counts[ins.reg - 1] -= 1;
      return {std::move(d)};
    }
    case InstrKind::Fork:
      return {{ins.to, c.counts}, {ins.to2, c.counts}};
  }
  return {};
}

// Replay every edge of the tree against its tagged instruction.
inline bool tree_valid(const Machine& m, const ComputationTree& t) {
  if (!t.instruction) return t.children.empty() && is_accepting(m, t.config);
  if (*t.instruction >= m.instructions.size()) return false;
  std::vector<Configuration> next = apply_instruction(m, *t.instruction, t.config);
  if (next.size() != t.children.size() || next.empty()) return false;
  for (size_t i = 0; i < next.size(); ++i)
    if (!(t.children[i].config == next[i]) || !tree_valid(m, t.children[i])) return false;
  return true;
}

namespace detail {

inline std::optional<ComputationTree> accept_dfs(const Machine& m, const Configuration& c,
                                                 size_t height) {
  if (is_accepting(m, c)) return ComputationTree{c, {}, {}};
  if (height == 0) return std::nullopt;
  for (size_t i = 0; i < m.instructions.size(); ++i) {
    std::vector<Configuration> next = apply_instruction(m, i, c);
    if (next.empty()) continue;
    std::vector<ComputationTree> kids;
    bool ok = true;
    for (const auto& n : next) {
      auto sub = accept_dfs(m, n, height - 1);
      if (!sub) { ok = false; break; }
      kids.push_back(std::move(*sub));
    }
    if (ok) return ComputationTree{c, i, std::move(kids)};
  }
  return std::nullopt;
}

}  // namespace detail

// Iterative deepening over instruction choices in listed order, so the first
// witness is the least-height one and reproducible. none is not a disproof.
inline std::optional<ComputationTree> accepts_bounded(const Machine& m, const Configuration& c,
                                                      size_t depth_budget) {
  for (size_t h = 0; h <= depth_budget; ++h)
    if (auto t = detail::accept_dfs(m, c, h)) return t;
  return std::nullopt;
}

struct Encoding {
  Formula i, t, theta;
};

inline Formula instruction_formula(const Instruction& ins, Mode mode) {
  Formula from = Formula::atom(ins.from);
  Formula to = Formula::atom(ins.to);
  switch (ins.kind) {
    case InstrKind::Increment: {
      Formula body = Formula::star(to, Formula::atom(register_atom(ins.reg)));
      return mode == Mode::Commutative ? Formula::wand(std::move(from), std::move(body))
                                       : Formula::rdiv(std::move(body), std::move(from));
    }
    case InstrKind::Decrement: {
      Formula body = Formula::star(from, Formula::atom(register_atom(ins.reg)));
      return mode == Mode::Commutative ? Formula::wand(std::move(body), std::move(to))
                                       : Formula::rdiv(std::move(to), std::move(body));
    }
    case InstrKind::Fork: {
      Formula body = Formula::disj(to, Formula::atom(ins.to2));
      return mode == Mode::Commutative ? Formula::wand(std::move(from), std::move(body))
                                       : Formula::rdiv(std::move(body), std::move(from));
    }
  }
  return {};
}

// The conjunction of an empty instruction set folds to top.
inline Encoding encode(const Machine& m, Mode mode = Mode::Commutative) {
  Formula i;
  for (const auto& ins : m.instructions) {
    Formula f = instruction_formula(ins, mode);
    i = i.valid() ? Formula::conj(std::move(i), std::move(f)) : std::move(f);
  }
  if (!i.valid()) i = Formula::top();
  Formula qf = Formula::atom(m.final);
  Formula t = mode == Mode::Commutative
                  ? Formula::imp(Formula::wand(i, qf), qf)
                  : Formula::imp(Formula::ldiv(i, qf), qf);
  Formula theta = mode == Mode::Commutative
                      ? Formula::conj(Formula::wand(Formula::top(), t), Formula::one())
                      : Formula::conj(Formula::ldiv(Formula::top(), t), Formula::one());
  return {std::move(i), std::move(t), std::move(theta)};
}

// The sequent encoding a configuration: q, r_1^{n_1}, ..., r_k^{n_k}, theta
// with the final state as succedent.
inline Bunch config_bunch(const Machine& m, const Configuration& c, Mode mode = Mode::Commutative) {
  std::vector<Bunch> ch;
  ch.push_back(Bunch::leaf(Formula::atom(c.state)));
  for (size_t j = 0; j < m.registers; ++j)
    for (size_t n = 0; n < c.counts[j]; ++n)
      ch.push_back(Bunch::leaf(Formula::atom(register_atom(j + 1))));
  ch.push_back(Bunch::leaf(encode(m, mode).theta));
  return Bunch::comma(std::move(ch));
}

inline Sequent config_sequent(const Machine& m, const Configuration& c,
                              Mode mode = Mode::Commutative) {
  return {config_bunch(m, c, mode), Formula::atom(m.final)};
}

enum class GadgetKind { Base, Increment, Decrement, Fork };

namespace detail {

inline std::optional<Path> find_leaf_path(const Bunch& b, const Formula& f) {
  if (b.kind() == BKind::Leaf)
    return b.formula() == f ? std::optional<Path>{Path{}} : std::nullopt;
  if (b.kind() == BKind::Comma || b.kind() == BKind::Semi)
    for (size_t i = 0; i < b.children().size(); ++i)
      if (auto p = find_leaf_path(b.children()[i], f)) {
        p->insert(p->begin(), i);
        return p;
      }
  return std::nullopt;
}

inline std::optional<Path> find_node_path(const Bunch& b, const Bunch& target) {
  if (b == target) return Path{};
  if (b.kind() == BKind::Comma || b.kind() == BKind::Semi)
    for (size_t i = 0; i < b.children().size(); ++i)
      if (auto p = find_node_path(b.children()[i], target)) {
        p->insert(p->begin(), i);
        return p;
      }
  return std::nullopt;
}

// Position of the formula in the canonical form of the written antecedent,
// which is where certificate paths point.
inline Path leaf_path(const Bunch& written, const Formula& f, Mode mode) {
  auto p = find_leaf_path(canonical(written, mode), f);
  if (!p) throw std::logic_error("gadget principal not found");
  return *p;
}

inline Path node_path(const Bunch& written, const Bunch& target, Mode mode) {
  auto p = find_node_path(canonical(written, mode), canonical(target, mode));
  if (!p) throw std::logic_error("gadget position not found");
  return *p;
}

}  // namespace detail

// One proof step of the simulation. Base closes an accepting leaf; the other
// kinds extend subproofs of the successor configuration sequent(s) downward
// to the parent's, re-materializing the instruction conjunction from theta.
inline Proof gadget_proof(GadgetKind kind, const Machine& m, const Configuration& c,
                          std::vector<Proof> subproofs = {}, size_t instruction = 0) {
  const Mode mode = Mode::Commutative;
  Encoding e = encode(m, mode);
  Formula qf = Formula::atom(m.final);
  Formula q = Formula::atom(c.state);
  Formula one = Formula::one();
  Formula tw = Formula::wand(Formula::top(), e.t);
  Bunch gamma = config_bunch(m, c, mode);

  // q and the register atoms, without theta
  std::vector<Bunch> qr_parts;
  {
    auto all = gamma.children();
    qr_parts.assign(all.begin(), all.end() - 1);
  }

  if (kind == GadgetKind::Base) {
    if (!is_accepting(m, c))
      throw std::invalid_argument("base gadget: configuration is not the accepting one");
    if (!subproofs.empty())
      throw std::invalid_argument("base gadget takes no subproofs");
    Proof axn = Proof::make(RuleTag::Ax, {Bunch::leaf(qf), qf});
    Proof eq = Proof::make(RuleTag::Equiv,
                           {Bunch::comma(Bunch::leaf(qf), Bunch::mult_unit()), qf}, {std::move(axn)});
    Bunch c1 = Bunch::comma(Bunch::leaf(qf), Bunch::leaf(one));
    Proof onel = Proof::make(RuleTag::OneL, {c1, qf}, {std::move(eq)},
                             detail::leaf_path(c1, one, mode));
    Bunch pair = Bunch::semi(Bunch::leaf(tw), Bunch::leaf(one));
    Bunch cw = Bunch::comma(Bunch::leaf(qf), pair);
    Proof wn = Proof::make(RuleTag::W, {cw, qf}, {std::move(onel)},
                           detail::node_path(cw, pair, mode), Bunch::leaf(tw));
    return Proof::make(RuleTag::AndL, {gamma, qf}, {std::move(wn)},
                       detail::leaf_path(gamma, e.theta, mode));
  }

  if (instruction >= m.instructions.size())
    throw std::invalid_argument("no such instruction");
  const Instruction& ins = m.instructions[instruction];
  bool kind_ok = (kind == GadgetKind::Increment && ins.kind == InstrKind::Increment) ||
                 (kind == GadgetKind::Decrement && ins.kind == InstrKind::Decrement) ||
                 (kind == GadgetKind::Fork && ins.kind == InstrKind::Fork);
  if (!kind_ok) throw std::invalid_argument("gadget kind does not match the instruction");
  std::vector<Configuration> next = apply_instruction(m, instruction, c);
  if (next.empty()) throw std::invalid_argument("instruction does not apply to the configuration");
  if (subproofs.size() != next.size())
    throw std::invalid_argument("gadget needs one subproof per successor");
  for (size_t i = 0; i < next.size(); ++i) {
    Sequent want = config_sequent(m, next[i], mode);
    if (!(canonical(subproofs[i].conclusion(), mode) == canonical(want, mode)))
      throw std::invalid_argument("subproof conclusion mismatch: expected '" + to_text(want) +
                                  "', got '" + to_text(subproofs[i].conclusion()) + "'");
  }

  Formula d = instruction_formula(ins, mode);
  auto with_extra = [&](Bunch extra) {
    std::vector<Bunch> ch = gamma.children();
    ch.push_back(std::move(extra));
    return Bunch::comma(std::move(ch));
  };
  auto peeled = [&](Bunch extra) {
    // gamma without the state atom the instruction consumed
    std::vector<Bunch> ch(gamma.children().begin() + 1, gamma.children().end());
    ch.push_back(std::move(extra));
    return Bunch::comma(std::move(ch));
  };

  // topmost trunk node: -*L on the instruction formula itself
  Proof fin;
  Bunch fc = with_extra(Bunch::leaf(d));
  Path fp = detail::leaf_path(fc, d, mode);
  switch (ins.kind) {
    case InstrKind::Decrement: {
      Formula ri = Formula::atom(register_atom(ins.reg));
      Bunch ma = Bunch::comma(Bunch::leaf(q), Bunch::leaf(ri));
      Proof minor = Proof::make(RuleTag::StarR, {ma, Formula::star(q, ri)},
                                {Proof::make(RuleTag::Ax, {Bunch::leaf(q), q}),
                                 Proof::make(RuleTag::Ax, {Bunch::leaf(ri), ri})});
      fin = Proof::make(RuleTag::WandL, {fc, qf}, {std::move(minor), std::move(subproofs[0])}, fp);
      break;
    }
    case InstrKind::Increment: {
      Formula made = Formula::star(Formula::atom(ins.to), Formula::atom(register_atom(ins.reg)));
      Bunch sc = peeled(Bunch::leaf(made));
      Proof starl = Proof::make(RuleTag::StarL, {sc, qf}, {std::move(subproofs[0])},
                                detail::leaf_path(sc, made, mode));
      Proof minor = Proof::make(RuleTag::Ax, {Bunch::leaf(q), q});
      fin = Proof::make(RuleTag::WandL, {fc, qf}, {std::move(minor), std::move(starl)}, fp);
      break;
    }
    case InstrKind::Fork: {
      Formula made = Formula::disj(Formula::atom(ins.to), Formula::atom(ins.to2));
      Bunch oc = peeled(Bunch::leaf(made));
      Proof orl = Proof::make(RuleTag::OrL, {oc, qf},
                              {std::move(subproofs[0]), std::move(subproofs[1])},
                              detail::leaf_path(oc, made, mode));
      Proof minor = Proof::make(RuleTag::Ax, {Bunch::leaf(q), q});
      fin = Proof::make(RuleTag::WandL, {fc, qf}, {std::move(minor), std::move(orl)}, fp);
      break;
    }
  }

  // strip the instruction conjunction down to the one applied
  Proof cur = std::move(fin);
  size_t nins = m.instructions.size();
  if (nins >= 2) {
    std::vector<Bunch> ins_leaves;
    std::vector<Formula> folds;  // folds[j] = conjunction of the first j+1 instructions
    for (size_t j = 0; j < nins; ++j) {
      Formula f = instruction_formula(m.instructions[j], mode);
      folds.push_back(j == 0 ? f : Formula::conj(folds[j - 1], f));
      ins_leaves.push_back(Bunch::leaf(std::move(f)));
    }
    std::vector<Bunch> others = ins_leaves;
    others.erase(others.begin() + long(instruction));
    Bunch all = Bunch::semi(ins_leaves);
    Bunch wc = with_extra(all);
    cur = Proof::make(RuleTag::W, {wc, qf}, {std::move(cur)}, detail::node_path(wc, all, mode),
                      join(std::move(others), BKind::Semi));
    for (size_t j = 1; j < nins; ++j) {
      // this step splits folds[j] into folds[j-1] and instruction j
      Bunch part;
      if (j == nins - 1) {
        part = Bunch::leaf(folds[j]);
      } else {
        std::vector<Bunch> ch{Bunch::leaf(folds[j])};
        ch.insert(ch.end(), ins_leaves.begin() + long(j) + 1, ins_leaves.end());
        part = Bunch::semi(std::move(ch));
      }
      Bunch ac = with_extra(std::move(part));
      cur = Proof::make(RuleTag::AndL, {ac, qf}, {std::move(cur)},
                        detail::leaf_path(ac, folds[j], mode));
    }
  }

  // re-materialize the conjunction from theta's top -* t conjunct
  Proof wr = Proof::make(RuleTag::WandR, {gamma, Formula::wand(e.i, qf)}, {std::move(cur)});
  Bunch ic = Bunch::semi(Bunch::leaf(e.t), gamma);
  Proof impl = Proof::make(RuleTag::ImpL, {ic, qf},
                           {std::move(wr), Proof::make(RuleTag::Ax, {Bunch::leaf(qf), qf})},
                           detail::leaf_path(ic, e.t, mode));
  Bunch qr = join(qr_parts, BKind::Comma);
  Proof side = Proof::make(RuleTag::W, {qr, Formula::top()},
                           {Proof::make(RuleTag::TopR, {Bunch::add_unit(), Formula::top()})},
                           Path{}, qr);
  Bunch lc;
  {
    std::vector<Bunch> ch = qr_parts;
    ch.push_back(Bunch::leaf(tw));
    lc = Bunch::semi(Bunch::comma(std::move(ch)), gamma);
  }
  Proof wl = Proof::make(RuleTag::WandL, {lc, qf}, {std::move(side), std::move(impl)},
                         detail::leaf_path(lc, tw, mode));
  Bunch pair = Bunch::semi(Bunch::leaf(tw), Bunch::leaf(one));
  Bunch w1c;
  {
    std::vector<Bunch> ch = qr_parts;
    ch.push_back(pair);
    w1c = Bunch::semi(Bunch::comma(std::move(ch)), gamma);
  }
  Proof w1 = Proof::make(RuleTag::W, {w1c, qf}, {std::move(wl)},
                         detail::node_path(w1c, pair, mode), Bunch::leaf(one));
  Bunch alc = Bunch::semi(gamma, gamma);
  Proof al = Proof::make(RuleTag::AndL, {alc, qf}, {std::move(w1)},
                         detail::leaf_path(alc, e.theta, mode));
  return Proof::make(RuleTag::C, {gamma, qf}, {std::move(al)}, Path{}, gamma);
}

// The soundness half of the reduction: fold an accepting computation tree
// into a derivation of its root configuration sequent.
inline Proof soundness_proof(const Machine& m, const ComputationTree& t) {
  if (!tree_valid(m, t)) throw std::invalid_argument("not an accepting computation tree");
  struct Build {
    const Machine& m;
    Proof node(const ComputationTree& t) {
      if (!t.instruction) return gadget_proof(GadgetKind::Base, m, t.config);
      std::vector<Proof> subs;
      subs.reserve(t.children.size());
      for (const auto& c : t.children) subs.push_back(node(c));
      GadgetKind k;
      switch (m.instructions[*t.instruction].kind) {
        case InstrKind::Increment: k = GadgetKind::Increment; break;
        case InstrKind::Decrement: k = GadgetKind::Decrement; break;
        default: k = GadgetKind::Fork; break;
      }
      return gadget_proof(k, m, t.config, std::move(subs), *t.instruction);
    }
  };
  return Build{m}.node(t);
}

namespace detail {

inline bool valid_atom_name(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char ch : s)
    if (!std::islower(static_cast<unsigned char>(ch)) &&
        !std::isdigit(static_cast<unsigned char>(ch)) && ch != '_')
      return false;
  return true;
}

}  // namespace detail

// Machine text format, one directive per line, '#' starts a comment:
//   states q0 q1 qf
//   final qf
//   registers 2
//   inc q0 q1 1
//   dec q1 qf 2
//   fork q0 q1 q1
inline Machine parse_machine(const std::string& text) {
  Machine m;
  bool have_states = false, have_final = false, have_registers = false;
  std::istringstream in(text);
  std::string line;
  size_t ln = 0;
  auto fail = [&](const std::string& what) { throw ParseError(ln, 1, what); };
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    auto state_word = [&]() {
      std::string s;
      if (!(ls >> s)) fail("missing state name");
      if (!detail::valid_atom_name(s)) fail("'" + s + "' is not a usable atom name");
      return s;
    };
    if (word == "states") {
      if (have_states) fail("duplicate states line");
      std::string s;
      while (ls >> s) {
        if (!detail::valid_atom_name(s)) fail("'" + s + "' is not a usable atom name");
        m.states.push_back(s);
      }
      if (m.states.empty()) fail("states line names no states");
      have_states = true;
    } else if (word == "final") {
      if (have_final) fail("duplicate final line");
      m.final = state_word();
      have_final = true;
    } else if (word == "registers") {
      if (have_registers) fail("duplicate registers line");
      if (!(ls >> m.registers)) fail("missing register count");
      have_registers = true;
    } else if (word == "inc" || word == "dec") {
      Instruction ins;
      ins.kind = word == "inc" ? InstrKind::Increment : InstrKind::Decrement;
      ins.from = state_word();
      ins.to = state_word();
      if (!(ls >> ins.reg)) fail("missing register index");
      m.instructions.push_back(std::move(ins));
    } else if (word == "fork") {
      Instruction ins;
      ins.kind = InstrKind::Fork;
      ins.from = state_word();
      ins.to = state_word();
      ins.to2 = state_word();
      m.instructions.push_back(std::move(ins));
    } else {
      fail("unknown directive '" + word + "'");
    }
    std::string rest;
    if (ls >> rest) fail("trailing input '" + rest + "'");
  }
  ln = 0;
  if (!have_states) fail("missing states line");
  if (!have_final) fail("missing final line");
  if (!have_registers) fail("missing registers line");
  auto known = [&](const std::string& s) {
    return std::find(m.states.begin(), m.states.end(), s) != m.states.end();
  };
  if (!known(m.final)) fail("final state '" + m.final + "' is not listed");
  for (const auto& s : m.states)
    for (size_t j = 1; j <= m.registers; ++j)
      if (s == register_atom(j)) fail("state '" + s + "' collides with a register atom");
  for (const auto& ins : m.instructions) {
    if (!known(ins.from) || !known(ins.to) || (ins.kind == InstrKind::Fork && !known(ins.to2)))
      fail("instruction uses an unlisted state");
    if (ins.kind != InstrKind::Fork && (ins.reg < 1 || ins.reg > m.registers))
      fail("register index out of range");
  }
  return m;
}

}  // namespace biwb
