#pragma once
// Wang tiles: tile sets, small rectangle and torus solvers, and the compiler
// from a tile set to the division-fragment formula whose refutability marks
// the set as tiling the quadrant.

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biwb/formula.hpp"
#include "biwb/parse.hpp"

namespace biwb {

// Edge colors are positive integers, listed (up, down, left, right).
struct Tile {
  int up = 0;
  int down = 0;
  int left = 0;
  int right = 0;
};

inline bool operator==(const Tile& a, const Tile& b) {
  return a.up == b.up && a.down == b.down && a.left == b.left && a.right == b.right;
}
inline bool operator!=(const Tile& a, const Tile& b) { return !(a == b); }

// Order and duplicates of the input list are preserved; the color range is
// whatever the tiles mention.
struct TileSet {
  std::vector<Tile> tiles;

  int colors() const {
    int k = 0;
    for (const Tile& t : tiles)
      for (int c : {t.up, t.down, t.left, t.right})
        if (c > k) k = c;
    return k;
  }
};

// Total assignment of tile indices to a width x height rectangle, or to a
// torus of the same dimensions when wrap is set. (0,0) is the lower left
// cell, x grows rightwards, y grows upwards.
struct TileAssignment {
  bool wrap = false;
  size_t width = 0;
  size_t height = 0;
  std::vector<size_t> cells;  // cells[y * width + x], indices into the tile list

  size_t cell(size_t x, size_t y) const { return cells[y * width + x]; }
  size_t& cell(size_t x, size_t y) { return cells[y * width + x]; }
};

// a sits directly left of b.
inline bool fits_horizontal(const Tile& a, const Tile& b) { return a.right == b.left; }
// b sits directly above a.
inline bool fits_vertical(const Tile& a, const Tile& b) { return a.up == b.down; }

// Checks shape totality and every adjacent pair; on a torus the pairs across
// the seam count as adjacent.
inline bool assignment_valid(const TileSet& w, const TileAssignment& a) {
  if (a.width == 0 || a.height == 0) return false;
  if (a.cells.size() != a.width * a.height) return false;
  for (size_t i : a.cells)
    if (i >= w.tiles.size()) return false;
  for (size_t y = 0; y < a.height; ++y)
    for (size_t x = 0; x < a.width; ++x) {
      const Tile& here = w.tiles[a.cell(x, y)];
      if (x + 1 < a.width) {
        if (!fits_horizontal(here, w.tiles[a.cell(x + 1, y)])) return false;
      } else if (a.wrap) {
        if (!fits_horizontal(here, w.tiles[a.cell(0, y)])) return false;
      }
      if (y + 1 < a.height) {
        if (!fits_vertical(here, w.tiles[a.cell(x, y + 1)])) return false;
      } else if (a.wrap) {
        if (!fits_vertical(here, w.tiles[a.cell(x, 0)])) return false;
      }
    }
  return true;
}

namespace detail {

constexpr size_t kUnassigned = static_cast<size_t>(-1);

// Every adjacency constraint touching (x, y) whose other endpoint is already
// placed. Cells are filled leftmost column first, bottom up, so within the
// sweep this sees the left and lower neighbors plus any torus seam partner.
inline bool placement_ok(const TileSet& w, const TileAssignment& a, size_t x, size_t y) {
  const Tile& here = w.tiles[a.cell(x, y)];
  auto placed = [&](size_t px, size_t py) { return a.cell(px, py) != kUnassigned; };
  if (x > 0 && placed(x - 1, y) &&
      !fits_horizontal(w.tiles[a.cell(x - 1, y)], here))
    return false;
  if (y > 0 && placed(x, y - 1) &&
      !fits_vertical(w.tiles[a.cell(x, y - 1)], here))
    return false;
  size_t rx = x + 1 < a.width ? x + 1 : (a.wrap ? 0 : kUnassigned);
  size_t uy = y + 1 < a.height ? y + 1 : (a.wrap ? 0 : kUnassigned);
  if (rx != kUnassigned && placed(rx, y) && !fits_horizontal(here, w.tiles[a.cell(rx, y)]))
    return false;
  if (uy != kUnassigned && placed(x, uy) && !fits_vertical(here, w.tiles[a.cell(x, uy)]))
    return false;
  return true;
}

inline bool fill_cells(const TileSet& w, TileAssignment& a, size_t at, size_t* steps) {
  if (at == a.cells.size()) return true;
  size_t x = at / a.height, y = at % a.height;
  for (size_t i = 0; i < w.tiles.size(); ++i) {
    a.cell(x, y) = i;
    if (steps) ++*steps;
    if (placement_ok(w, a, x, y) && fill_cells(w, a, at + 1, steps)) return true;
  }
  a.cell(x, y) = kUnassigned;
  return false;
}

inline std::optional<TileAssignment> solve(const TileSet& w, size_t width, size_t height,
                                           bool wrap, size_t* steps) {
  TileAssignment a;
  a.wrap = wrap;
  a.width = width;
  a.height = height;
  a.cells.assign(width * height, kUnassigned);
  if (w.tiles.empty()) return std::nullopt;
  if (!fill_cells(w, a, 0, steps)) return std::nullopt;
  return a;
}

}  // namespace detail

// Exhaustive backtracking over the full rectangle; nullopt is a proof that no
// assignment exists, hence that the set does not tile the quadrant. steps, if
// given, accumulates the number of tile placements tried.
inline std::optional<TileAssignment> tiles_region(const TileSet& w, size_t width, size_t height,
                                                  size_t* steps = nullptr) {
  if (width == 0 || height == 0) throw std::invalid_argument("region sides must be positive");
  return detail::solve(w, width, height, false, steps);
}

struct PeriodicTiling {
  size_t p = 0;
  size_t q = 0;
  TileAssignment assignment;
};

// First torus tiling in lexicographic (p, q) order. A hit extends to a tiling
// of the whole quadrant by repetition; nullopt is inconclusive beyond the
// bound.
inline std::optional<PeriodicTiling> search_periodic(const TileSet& w, size_t max_period,
                                                     size_t* steps = nullptr) {
  if (max_period == 0) throw std::invalid_argument("max period must be positive");
  for (size_t p = 1; p <= max_period; ++p)
    for (size_t q = 1; q <= max_period; ++q)
      if (auto a = detail::solve(w, p, q, true, steps))
        return PeriodicTiling{p, q, std::move(*a)};
  return std::nullopt;
}

// One tile per line as "up down left right"; '#' starts a comment, blank
// lines are skipped.
inline TileSet parse_tiles(const std::string& text) {
  TileSet w;
  std::istringstream in(text);
  std::string line;
  size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    ls.clear();
    ls.seekg(0);
    Tile t;
    int* sides[4] = {&t.up, &t.down, &t.left, &t.right};
    for (int* side : sides) {
      if (!(ls >> *side)) throw ParseError(ln, 1, "expected four edge colors");
      if (*side <= 0) throw ParseError(ln, 1, "edge colors are positive");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(ln, 1, "trailing input after tile");
    w.tiles.push_back(t);
  }
  return w;
}

// Header "width height", then one line per row of 1-based tile indices,
// bottom row first.
inline std::string print_assignment(const TileAssignment& a) {
  std::string out = std::to_string(a.width) + " " + std::to_string(a.height) + "\n";
  for (size_t y = 0; y < a.height; ++y) {
    for (size_t x = 0; x < a.width; ++x) {
      if (x) out += ' ';
      out += std::to_string(a.cell(x, y) + 1);
    }
    out += '\n';
  }
  return out;
}

inline TileAssignment parse_assignment(const std::string& text, bool wrap) {
  TileAssignment a;
  a.wrap = wrap;
  std::istringstream in(text);
  std::string line;
  size_t ln = 0;
  std::vector<std::vector<size_t>> rows;
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    if (a.width == 0) {
      long long width = 0, height = 0;
      if (!(ls >> width >> height)) {
        std::string probe;
        ls.clear();
        ls.seekg(0);
        if (!(ls >> probe)) continue;  // blank before the header
        throw ParseError(ln, 1, "expected 'width height' header");
      }
      if (width <= 0 || height <= 0) throw ParseError(ln, 1, "sides must be positive");
      a.width = static_cast<size_t>(width);
      a.height = static_cast<size_t>(height);
      continue;
    }
    std::vector<size_t> row;
    long long idx = 0;
    while (ls >> idx) {
      if (idx <= 0) throw ParseError(ln, 1, "tile indices are 1-based");
      row.push_back(static_cast<size_t>(idx - 1));
    }
    if (!ls.eof()) throw ParseError(ln, 1, "expected tile indices");
    if (row.empty()) continue;
    if (row.size() != a.width) throw ParseError(ln, 1, "row width mismatch");
    rows.push_back(std::move(row));
  }
  if (a.width == 0) throw ParseError(ln, 1, "missing header");
  if (rows.size() != a.height) throw ParseError(ln, 1, "row count mismatch");
  for (const auto& row : rows)
    a.cells.insert(a.cells.end(), row.begin(), row.end());
  return a;
}

namespace detail {

inline Formula fold_conj(const std::vector<Formula>& fs) {
  Formula out = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) out = Formula::conj(out, fs[i]);
  return out;
}

inline Formula fold_disj(const std::vector<Formula>& fs) {
  Formula out = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) out = Formula::disj(out, fs[i]);
  return out;
}

// a \ b, rendered as the magic wand in commutative mode.
inline Formula under(const Formula& a, const Formula& b, Mode mode) {
  return mode == Mode::Commutative ? Formula::wand(a, b) : Formula::ldiv(a, b);
}

// a / b, likewise (a / b and b \ a coincide commutatively).
inline Formula over(const Formula& a, const Formula& b, Mode mode) {
  return mode == Mode::Commutative ? Formula::wand(b, a) : Formula::rdiv(a, b);
}

// One edge block: the positive letter, then the other colors negated in
// ascending order.
inline Formula edge_block(const std::string& family, int color, int k) {
  std::vector<Formula> parts{Formula::atom(family + std::to_string(color))};
  for (int j = 1; j <= k; ++j)
    if (j != color) parts.push_back(Formula::neg(Formula::atom(family + std::to_string(j))));
  return fold_conj(parts);
}

}  // namespace detail

// The conjunction of literals naming exactly this tile, blocks in the order
// up, down, left, right over a palette of k colors.
inline Formula tile_literal(const Tile& t, int k) {
  return detail::fold_conj({detail::edge_block("u", t.up, k), detail::edge_block("d", t.down, k),
                            detail::edge_block("l", t.left, k),
                            detail::edge_block("r", t.right, k)});
}

namespace detail {

// Named pieces of the compiled formula; extraction re-evaluates them
// individually against a model.
struct PhiParts {
  Formula xp, yp;                    // primed increment letters
  Formula ee_c, oe_c, oo_c, eo_c;    // parity complements
  Formula a_ee, a_oe, a_oo, a_eo;    // the four corners
  Formula alpha;
  Formula bracket;                   // hypothesis conjunct of the top division
};

inline PhiParts phi_parts(const TileSet& w, Mode mode) {
  if (w.tiles.empty()) throw std::invalid_argument("empty tile set");
  using detail::fold_conj;
  using detail::fold_disj;
  const int k = w.colors();
  const Formula xx = Formula::atom("xx"), yy = Formula::atom("yy"), cc = Formula::atom("cc");
  const Formula ee = Formula::atom("ee"), oe = Formula::atom("oe");
  const Formula oo = Formula::atom("oo"), eo = Formula::atom("eo");

  const Formula xp = fold_conj({xx, cc, detail::under(cc, cc, mode)});
  const Formula yp = fold_conj({yy, cc, detail::under(cc, cc, mode)});
  const Formula ee_c = fold_disj({oe, oo, eo});
  const Formula oe_c = fold_disj({ee, oo, eo});
  const Formula oo_c = fold_disj({ee, oe, eo});
  const Formula eo_c = fold_disj({ee, oe, oo});

  std::vector<Formula> lits;
  lits.reserve(w.tiles.size());
  for (const Tile& t : w.tiles) lits.push_back(tile_literal(t, k));

  // Falsum stand-in for an empty match disjunction; the language has no bot.
  const Formula never = Formula::conj(ee, Formula::neg(ee));
  auto matches = [&](auto&& pred) {
    std::vector<Formula> out;
    for (size_t j = 0; j < w.tiles.size(); ++j)
      if (pred(w.tiles[j])) out.push_back(lits[j]);
    return out.empty() ? never : fold_disj(out);
  };

  // here: the parity letter of this corner; right/up: the parities reached by
  // one x / one y step; advance: the pinned increment witness.
  auto alpha_box = [&](const Formula& here, const Formula& n1, const Formula& n2,
                       const Formula& n3, const Formula& advance, const Formula& right,
                       const Formula& up) {
    std::vector<Formula> tiled;
    tiled.reserve(w.tiles.size());
    for (size_t i = 0; i < w.tiles.size(); ++i) {
      const Tile& t = w.tiles[i];
      Formula step_x = Formula::disj(
          here, Formula::conj(right, matches([&](const Tile& t2) { return t.right == t2.left; })));
      Formula step_y = Formula::disj(
          here, Formula::conj(up, matches([&](const Tile& t2) { return t.up == t2.down; })));
      tiled.push_back(fold_conj(
          {lits[i], detail::under(xx, step_x, mode), detail::over(step_y, yy, mode)}));
    }
    return fold_conj({here, Formula::neg(n1), Formula::neg(n2), Formula::neg(n3), advance,
                      fold_disj(tiled)});
  };

  const Formula a_ee =
      alpha_box(ee, oe, oo, eo, Formula::neg(detail::under(xp, oe_c, mode)), oe, eo);
  const Formula a_oe =
      alpha_box(oe, oo, eo, ee, Formula::neg(detail::over(oo_c, yp, mode)), ee, oo);
  const Formula a_oo =
      alpha_box(oo, eo, ee, oe, Formula::neg(detail::under(xp, eo_c, mode)), eo, oe);
  const Formula a_eo =
      alpha_box(eo, ee, oe, oo, Formula::neg(detail::over(ee_c, yp, mode)), oo, ee);
  const Formula alpha = fold_disj({a_ee, a_oe, a_oo, a_eo});

  const Formula bracket =
      fold_conj({Formula::neg(detail::under(xp, oe_c, mode)), detail::under(cc, alpha, mode),
                 detail::under(cc, detail::over(alpha, cc, mode), mode),
                 detail::over(alpha, cc, mode)});
  return PhiParts{xp, yp, ee_c, oe_c, oo_c, eo_c, a_ee, a_oe, a_oo, a_eo, alpha, bracket};
}

}  // namespace detail

// Compiles a tile set into the formula that is refutable exactly when the
// set tiles the quadrant. Atoms: u1..uk, d1..dk, l1..lk, r1..rk for the edge
// colors, xx and yy for the coordinate increments, cc for the associativity
// gadget, the four parity letters ee, oe, oo, eo, and the target letter p.
inline Formula compile_phi(const TileSet& w, Mode mode) {
  return detail::under(detail::phi_parts(w, mode).bracket, Formula::atom("p"), mode);
}

}  // namespace biwb
