#pragma once
// The finite truncation of the grid model a torus tiling induces, the
// two-coordinate abstraction of satisfaction in it, and the staircase
// extraction that reads a tile assignment back out of a refuting model.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "biwb/formula.hpp"
#include "biwb/frames.hpp"
#include "biwb/tiling.hpp"

namespace biwb {

// Tile of the wrapped assignment at grid column m, row n.
inline const Tile& tile_at(const TileSet& w, const TileAssignment& tau, size_t m, size_t n) {
  return w.tiles[tau.cell(m % tau.width, n % tau.height)];
}

// States are subsets of {0..2K-1} (the state index is the element bitmask),
// composition is union, negation is complement. Even elements count toward
// the first grid coordinate, odd elements toward the second.
inline Model build_truncated_model(const TileSet& w, const TileAssignment& tau, size_t K) {
  if (!tau.wrap || !assignment_valid(w, tau))
    throw std::invalid_argument("need a valid wrapped tiling");
  if (K < 1 || K > 4) throw std::invalid_argument("coordinate bound out of range");

  const size_t elems = 2 * K;
  const size_t n = size_t(1) << elems;
  Model m;
  m.frame.states = n;
  m.frame.comp.assign(n * n, StateSet(n));
  for (size_t u = 0; u < n; ++u)
    for (size_t v = 0; v < n; ++v) m.frame.compose(u, v) = StateSet::single(n, u | v);
  m.frame.neg_kind = NegKind::Complement;

  uint64_t even_mask = 0, odd_mask = 0;
  for (size_t i = 0; i < K; ++i) {
    even_mask |= uint64_t(1) << (2 * i);
    odd_mask |= uint64_t(1) << (2 * i + 1);
  }

  auto& val = m.valuation;
  val["p"] = StateSet(n);
  val["xx"] = StateSet(n);
  val["yy"] = StateSet(n);
  val["cc"] = StateSet(n);
  for (const char* letter : {"ee", "oe", "oo", "eo"}) val[letter] = StateSet(n);
  const int k = w.colors();
  for (const char* family : {"u", "d", "l", "r"})
    for (int c = 1; c <= k; ++c) val[family + std::to_string(c)] = StateSet(n);

  for (size_t i = 0; i < K; ++i) {
    val["xx"].set(size_t(1) << (2 * i));
    val["yy"].set(size_t(1) << (2 * i + 1));
  }
  for (size_t x = 1; x < n; ++x) val["cc"].set(x);
  for (size_t x = 0; x < n; ++x) {
    size_t me = static_cast<size_t>(__builtin_popcountll(x & even_mask));
    size_t mo = static_cast<size_t>(__builtin_popcountll(x & odd_mask));
    const char* letter = me % 2 ? (mo % 2 ? "oo" : "oe") : (mo % 2 ? "eo" : "ee");
    val[letter].set(x);
    const Tile& t = tile_at(w, tau, me, mo);
    val["u" + std::to_string(t.up)].set(x);
    val["d" + std::to_string(t.down)].set(x);
    val["l" + std::to_string(t.left)].set(x);
    val["r" + std::to_string(t.right)].set(x);
  }
  return m;
}

// A point of the abstraction: how many even and odd elements a state holds.
// (0,0) is the distinguished start.
struct AbstractState {
  size_t m = 0;
  size_t n = 0;
};

namespace detail {

enum class DivisorShape { None, AddEven, AddOdd, AddAny };

// The five hypothesis shapes whose composition behaviour the abstraction
// knows: x, x', y, y', c, matched structurally in either rendering.
inline DivisorShape divisor_shape(const Formula& d) {
  const Formula xx = Formula::atom("xx"), yy = Formula::atom("yy"), cc = Formula::atom("cc");
  if (d == xx) return DivisorShape::AddEven;
  if (d == yy) return DivisorShape::AddOdd;
  if (d == cc) return DivisorShape::AddAny;
  for (Mode mode : {Mode::NonCommutative, Mode::Commutative}) {
    if (d == fold_conj({xx, cc, under(cc, cc, mode)})) return DivisorShape::AddEven;
    if (d == fold_conj({yy, cc, under(cc, cc, mode)})) return DivisorShape::AddOdd;
  }
  return DivisorShape::None;
}

}  // namespace detail

// Truth of a compiled-formula subterm at an abstract point. Divisions
// quantify over the abstract successors: a fresh element bumps a coordinate
// (needs room below K), a stale one leaves the point unchanged (needs the
// coordinate nonzero, or for c a nonempty state).
inline bool eval_abstract(const Formula& f, AbstractState a, const TileSet& w,
                          const TileAssignment& tau, size_t K) {
  if (a.m > K || a.n > K) throw EvalError("abstract point out of range");
  switch (f.kind()) {
    case FKind::Atom: {
      const std::string& s = f.name();
      if (s == "p") return false;
      if (s == "xx") return a.m == 1 && a.n == 0;
      if (s == "yy") return a.m == 0 && a.n == 1;
      if (s == "cc") return a.m + a.n > 0;
      if (s == "ee") return a.m % 2 == 0 && a.n % 2 == 0;
      if (s == "oe") return a.m % 2 == 1 && a.n % 2 == 0;
      if (s == "oo") return a.m % 2 == 1 && a.n % 2 == 1;
      if (s == "eo") return a.m % 2 == 0 && a.n % 2 == 1;
      if (s.size() >= 2 && s.find_first_not_of("0123456789", 1) == std::string::npos) {
        int color = std::stoi(s.substr(1));
        const Tile& t = tile_at(w, tau, a.m, a.n);
        switch (s[0]) {
          case 'u': return t.up == color;
          case 'd': return t.down == color;
          case 'l': return t.left == color;
          case 'r': return t.right == color;
          default: break;
        }
      }
      throw EvalError("atom outside the compiled vocabulary: " + s);
    }
    case FKind::Neg:
      return !eval_abstract(f.child(), a, w, tau, K);
    case FKind::And:
      return eval_abstract(f.left(), a, w, tau, K) && eval_abstract(f.right(), a, w, tau, K);
    case FKind::Or:
      return eval_abstract(f.left(), a, w, tau, K) || eval_abstract(f.right(), a, w, tau, K);
    case FKind::Ldiv:
    case FKind::Wand:
    case FKind::Rdiv: {
      bool left_divisor = f.kind() != FKind::Rdiv;
      const Formula& d = left_divisor ? f.left() : f.right();
      const Formula& t = left_divisor ? f.right() : f.left();
      switch (detail::divisor_shape(d)) {
        case detail::DivisorShape::AddEven: {
          if (a.m > 0 && !eval_abstract(t, {a.m, a.n}, w, tau, K)) return false;
          if (a.m < K && !eval_abstract(t, {a.m + 1, a.n}, w, tau, K)) return false;
          return true;
        }
        case detail::DivisorShape::AddOdd: {
          if (a.n > 0 && !eval_abstract(t, {a.m, a.n}, w, tau, K)) return false;
          if (a.n < K && !eval_abstract(t, {a.m, a.n + 1}, w, tau, K)) return false;
          return true;
        }
        case detail::DivisorShape::AddAny: {
          for (size_t mm = a.m; mm <= K; ++mm)
            for (size_t nn = a.n; nn <= K; ++nn) {
              if (mm == a.m && nn == a.n && a.m == 0 && a.n == 0) continue;
              if (!eval_abstract(t, {mm, nn}, w, tau, K)) return false;
            }
          return true;
        }
        case detail::DivisorShape::None:
          throw EvalError("division with an unsupported hypothesis: " + to_text(d));
      }
      throw EvalError("unreachable");
    }
    default:
      throw EvalError("connective outside the abstract fragment: " + to_text(f));
  }
}

struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads a grid x grid tile assignment out of a model refuting the compiled
// formula for w: walks the staircase of witnesses from the start state,
// completes the grid with associativity witnesses, then reads the unique
// tile literal holding at each point. Cell (i, j) of the result is the tile
// at grid point (1 + i, j). The budget caps witness probes; probes_used, if
// given, reports how many a successful run spent.
inline TileAssignment extract_tiling(const Model& model, const TileSet& w,
                                     std::optional<size_t> start, size_t grid,
                                     size_t budget = size_t(-1), size_t* probes_used = nullptr) {
  if (grid < 1) throw std::invalid_argument("need a positive grid size");
  detail::PhiParts parts = detail::phi_parts(w, Mode::NonCommutative);
  const Frame& fr = model.frame;

  // The start conjunct that seeds the staircase. The full hypothesis bracket
  // is unsatisfiable in a finite truncation (its c-division reaches saturated
  // states), so the default start searches for this conjunct alone.
  Formula start_guard =
      Formula::neg(detail::under(parts.xp, parts.oe_c, Mode::NonCommutative));
  StateSet hyp = eval(model, start_guard);
  StateSet xp = eval(model, parts.xp), yp = eval(model, parts.yp);
  StateSet guard_ee = eval(model, parts.ee_c), guard_oe = eval(model, parts.oe_c);
  StateSet guard_oo = eval(model, parts.oo_c), guard_eo = eval(model, parts.eo_c);
  const StateSet* parity[4] = {&model.valuation.at("ee"), &model.valuation.at("oe"),
                               &model.valuation.at("oo"), &model.valuation.at("eo")};
  const int k = w.colors();
  std::vector<StateSet> lits;
  lits.reserve(w.tiles.size());
  for (const Tile& t : w.tiles) lits.push_back(eval(model, tile_literal(t, k)));

  size_t s;
  if (start) {
    if (*start >= fr.states) throw std::invalid_argument("start state out of range");
    s = *start;
  } else {
    if (hyp.none())
      throw ExtractionError("witness not found: no state satisfies the start conjunct");
    s = hyp.members().front();
  }

  size_t probes = budget;
  auto spend = [&] {
    if (probes == 0) throw ExtractionError("witness not found: probe budget exhausted");
    --probes;
  };

  std::map<std::pair<size_t, size_t>, size_t> pt;
  std::vector<size_t> xs(grid + 1, 0), ys(grid, 0);

  // One witness search: an element of candidates composed on the given side
  // of base, landing outside the guard. Lowest indices first.
  auto step = [&](const StateSet& candidates, size_t base, bool element_left,
                  const StateSet& guard, const char* what) {
    for (size_t e : candidates.members()) {
      const StateSet& targets = element_left ? fr.compose(e, base) : fr.compose(base, e);
      for (size_t target : targets.members()) {
        spend();
        if (!guard.test(target)) return std::make_pair(e, target);
      }
    }
    throw ExtractionError(std::string("witness not found: ") + what);
  };

  auto [x1, base_pt] = step(xp, s, true, guard_oe, "no staircase base step");
  xs[1] = x1;
  pt[{1, 0}] = base_pt;
  for (size_t i = 1; i < grid; ++i) {
    auto [yi, up_pt] =
        step(yp, pt[{i, i - 1}], false, i % 2 ? guard_oo : guard_ee, "no staircase row step");
    ys[i] = yi;
    pt[{i, i}] = up_pt;
    auto [xi, right_pt] =
        step(xp, pt[{i, i}], true, i % 2 ? guard_eo : guard_oe, "no staircase column step");
    xs[i + 1] = xi;
    pt[{i + 1, i}] = right_pt;
  }

  // Fill below the staircase: at (m, n) with the point above right known,
  // pick the composite that the row witness carries up to it.
  if (grid >= 2)
    for (size_t n = grid - 1; n-- > 0;)
      for (size_t m = n + 1; m < grid; ++m) {
        size_t here = pt.at({m, n}), above_right = pt.at({m + 1, n + 1});
        bool placed = false;
        for (size_t cand : fr.compose(xs[m + 1], here).members()) {
          spend();
          if (fr.compose(cand, ys[n + 1]).test(above_right)) {
            pt[{m + 1, n}] = cand;
            placed = true;
            break;
          }
        }
        if (!placed) throw ExtractionError("witness not found: no grid fill below the staircase");
      }

  // Fill above it: at (m, n) with the point right of the target known, pick
  // the composite the column witness carries right to it.
  for (size_t m = grid; m-- > 1;)
    for (size_t n = m; n + 1 < grid; ++n) {
      size_t here = pt.at({m, n}), above_right = pt.at({m + 1, n + 1});
      bool placed = false;
      for (size_t cand : fr.compose(here, ys[n + 1]).members()) {
        spend();
        if (fr.compose(xs[m + 1], cand).test(above_right)) {
          pt[{m, n + 1}] = cand;
          placed = true;
          break;
        }
      }
      if (!placed) throw ExtractionError("witness not found: no grid fill above the staircase");
    }

  TileAssignment out;
  out.wrap = false;
  out.width = grid;
  out.height = grid;
  out.cells.assign(grid * grid, 0);
  for (size_t j = 0; j < grid; ++j)
    for (size_t i = 0; i < grid; ++i) {
      size_t q = pt.at({i + 1, j});
      std::string where = " at point (" + std::to_string(i + 1) + "," + std::to_string(j) + ")";
      size_t parity_index = (i + 1) % 2 ? (j % 2 ? 2 : 1) : (j % 2 ? 3 : 0);
      size_t parity_hits = 0;
      for (const StateSet* letter : parity)
        if (letter->test(q)) ++parity_hits;
      if (parity_hits != 1 || !parity[parity_index]->test(q))
        throw ExtractionError("invariant breach: parity letters" + where);

      std::optional<size_t> chosen;
      for (size_t t = 0; t < w.tiles.size(); ++t) {
        if (!lits[t].test(q)) continue;
        bool duplicate = false;
        for (size_t earlier = 0; earlier < t && !duplicate; ++earlier)
          duplicate = w.tiles[earlier] == w.tiles[t] && lits[earlier].test(q);
        if (duplicate) continue;
        if (chosen) throw ExtractionError("invariant breach: multiple tiles" + where);
        chosen = t;
      }
      if (!chosen) throw ExtractionError("witness not found: no tile literal holds" + where);
      out.cell(i, j) = *chosen;
    }

  if (!assignment_valid(w, out))
    throw ExtractionError("invariant breach: extracted assignment fails adjacency");
  if (probes_used) *probes_used = budget - probes;
  return out;
}

}  // namespace biwb
