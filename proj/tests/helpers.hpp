#pragma once
// Random object generators shared by the test files.

#include <random>
#include <vector>

#include "biwb/acm.hpp"
#include "biwb/bunch.hpp"
#include "biwb/formula.hpp"

namespace testgen {

inline biwb::Formula random_formula(std::mt19937& rng, int depth) {
  using biwb::Formula;
  static const char* pool[] = {"p", "q", "r", "s", "a", "b"};
  std::uniform_int_distribution<int> kind(0, depth <= 0 ? 1 : 9);
  switch (kind(rng)) {
    case 0: case 1: {
      std::uniform_int_distribution<int> pick(0, 7);
      int i = pick(rng);
      if (i == 6) return Formula::top();
      if (i == 7) return Formula::one();
      return Formula::atom(pool[i]);
    }
    case 2: return Formula::neg(random_formula(rng, depth - 1));
    case 3: return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5: return Formula::imp(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 6: return Formula::star(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 7: return Formula::wand(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 8: return Formula::ldiv(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return Formula::rdiv(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

inline biwb::Bunch random_bunch(std::mt19937& rng, int depth) {
  using biwb::Bunch;
  std::uniform_int_distribution<int> kind(0, depth <= 0 ? 2 : 8);
  switch (kind(rng)) {
    case 0: case 1: return Bunch::leaf(random_formula(rng, 2));
    case 2: {
      std::uniform_int_distribution<int> u(0, 1);
      return u(rng) ? Bunch::mult_unit() : Bunch::add_unit();
    }
    default: {
      std::uniform_int_distribution<int> width(2, 3), u(0, 1);
      std::vector<Bunch> ch;
      int w = width(rng);
      for (int i = 0; i < w; ++i) ch.push_back(random_bunch(rng, depth - 1));
      return u(rng) ? Bunch::comma(std::move(ch)) : Bunch::semi(std::move(ch));
    }
  }
}

// Small machine within the bounds used by the reduction exercises: at most
// 3 states, 2 registers, 4 instructions.
inline biwb::Machine random_machine(std::mt19937& rng) {
  using namespace biwb;
  static const char* pool[] = {"qf", "q0", "q1"};
  std::uniform_int_distribution<size_t> nstates(1, 3), nregs(1, 2), nins(1, 4);
  Machine m;
  size_t ns = nstates(rng);
  for (size_t i = 0; i < ns; ++i) m.states.push_back(pool[i]);
  m.final = "qf";
  m.registers = nregs(rng);
  std::uniform_int_distribution<size_t> st(0, ns - 1), rg(1, m.registers), kd(0, 2);
  size_t k = nins(rng);
  for (size_t i = 0; i < k; ++i) {
    Instruction ins;
    switch (kd(rng)) {
      case 0: ins.kind = InstrKind::Increment; break;
      case 1: ins.kind = InstrKind::Decrement; break;
      default: ins.kind = InstrKind::Fork; break;
    }
    ins.from = m.states[st(rng)];
    ins.to = m.states[st(rng)];
    if (ins.kind == InstrKind::Fork)
      ins.to2 = m.states[st(rng)];
    else
      ins.reg = rg(rng);
    m.instructions.push_back(std::move(ins));
  }
  return m;
}

// Every configuration of m whose register sum is at most max_sum.
inline std::vector<biwb::Configuration> all_configurations(const biwb::Machine& m,
                                                           size_t max_sum) {
  std::vector<std::vector<size_t>> counts{{}};
  for (size_t j = 0; j < m.registers; ++j) {
    std::vector<std::vector<size_t>> next;
    for (const auto& c : counts) {
      size_t used = 0;
      for (size_t n : c) used += n;
      for (size_t n = 0; used + n <= max_sum; ++n) {
        auto d = c;
        d.push_back(n);
        next.push_back(std::move(d));
      }
    }
    counts = std::move(next);
  }
  std::vector<biwb::Configuration> out;
  for (const auto& s : m.states)
    for (const auto& c : counts) out.push_back({s, c});
  return out;
}

}  // namespace testgen
