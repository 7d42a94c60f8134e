#pragma once
// Finite associative frames with a disjointive negation operation, models
// over them, evaluation of the {&, |, ~, \, /} fragment, complex algebra
// checking, and exhaustive countermodel enumeration.

#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biwb/formula.hpp"
#include "biwb/parse.hpp"

namespace biwb {

// Subset of a carrier of fixed size, packed into words.
class StateSet {
  size_t n_ = 0;
  std::vector<uint64_t> w_;

public:
  StateSet() = default;
  explicit StateSet(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  static StateSet all(size_t n) {
    StateSet s(n);
    for (size_t i = 0; i < n; ++i) s.set(i);
    return s;
  }
  static StateSet single(size_t n, size_t i) {
    StateSet s(n);
    s.set(i);
    return s;
  }

  size_t size() const { return n_; }
  bool test(size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
  void set(size_t i) { w_[i / 64] |= uint64_t(1) << (i % 64); }
  void reset(size_t i) { w_[i / 64] &= ~(uint64_t(1) << (i % 64)); }

  size_t count() const {
    size_t c = 0;
    for (uint64_t v : w_) c += static_cast<size_t>(__builtin_popcountll(v));
    return c;
  }
  bool none() const {
    for (uint64_t v : w_)
      if (v) return false;
    return true;
  }
  bool any() const { return !none(); }

  StateSet& operator|=(const StateSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  StateSet& operator&=(const StateSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }

  StateSet complement() const {
    StateSet s(n_);
    for (size_t i = 0; i < w_.size(); ++i) s.w_[i] = ~w_[i];
    if (n_ % 64) s.w_.back() &= (uint64_t(1) << (n_ % 64)) - 1;
    return s;
  }
  bool subset_of(const StateSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const StateSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  friend bool operator==(const StateSet& a, const StateSet& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  friend bool operator!=(const StateSet& a, const StateSet& b) { return !(a == b); }
  friend bool operator<(const StateSet& a, const StateSet& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.w_ < b.w_;
  }

  std::vector<size_t> members() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < n_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }
};

// N is either a sparse table (images default to the empty set, which is
// always disjointive) or the full boolean complement.
enum class NegKind { Sparse, Complement };

struct Frame {
  size_t states = 0;
  std::vector<StateSet> comp;  // comp[x * states + y]
  NegKind neg_kind = NegKind::Sparse;
  std::map<StateSet, StateSet> neg;

  static Frame empty(size_t n) {
    Frame f;
    f.states = n;
    f.comp.assign(n * n, StateSet(n));
    return f;
  }

  const StateSet& compose(size_t x, size_t y) const { return comp[x * states + y]; }
  StateSet& compose(size_t x, size_t y) { return comp[x * states + y]; }

  StateSet compose(const StateSet& xs, const StateSet& ys) const {
    StateSet out(states);
    for (size_t x = 0; x < states; ++x)
      if (xs.test(x))
        for (size_t y = 0; y < states; ++y)
          if (ys.test(y)) out |= compose(x, y);
    return out;
  }

  StateSet negate(const StateSet& xs) const {
    if (neg_kind == NegKind::Complement) return xs.complement();
    auto it = neg.find(xs);
    return it == neg.end() ? StateSet(states) : it->second;
  }
};

struct Model {
  Frame frame;
  std::map<std::string, StateSet> valuation;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Satisfaction sets of the fragment connectives. When partial is set,
// negation consults only the explicit table and a missing entry aborts the
// evaluation by reporting the set that needs an image.
struct Evaluator {
  const Model& m;
  bool partial = false;
  std::optional<StateSet> missing;

  StateSet run(const Formula& f) {
    const Frame& fr = m.frame;
    switch (f.kind()) {
      case FKind::Atom: {
        auto it = m.valuation.find(f.name());
        if (it == m.valuation.end())
          throw EvalError("no valuation for atom '" + f.name() + "'");
        return it->second;
      }
      case FKind::Neg: {
        StateSet arg = run(f.child());
        if (missing) return StateSet(fr.states);
        if (partial && fr.neg_kind == NegKind::Sparse && !fr.neg.count(arg)) {
          missing = arg;
          return StateSet(fr.states);
        }
        return fr.negate(arg);
      }
      case FKind::And: {
        StateSet l = run(f.left());
        return missing ? l : l & run(f.right());
      }
      case FKind::Or: {
        StateSet l = run(f.left());
        return missing ? l : l | run(f.right());
      }
      case FKind::Ldiv:
      case FKind::Wand:
      case FKind::Rdiv: {
        bool left_divisor = f.kind() != FKind::Rdiv;
        StateSet divisor = run(left_divisor ? f.left() : f.right());
        if (missing) return divisor;
        StateSet target = run(left_divisor ? f.right() : f.left());
        if (missing) return target;
        StateSet out(fr.states);
        for (size_t s = 0; s < fr.states; ++s) {
          bool in = true;
          for (size_t x = 0; x < fr.states && in; ++x) {
            if (!divisor.test(x)) continue;
            const StateSet& img = left_divisor ? fr.compose(x, s) : fr.compose(s, x);
            in = img.subset_of(target);
          }
          if (in) out.set(s);
        }
        return out;
      }
      default:
        throw EvalError("connective outside the evaluated fragment: " + to_text(f));
    }
  }
};

}  // namespace detail

inline StateSet eval(const Model& m, const Formula& f) {
  detail::Evaluator e{m, false, {}};
  return e.run(f);
}

// Every broken law, one line each; empty means the frame is in order.
inline std::vector<std::string> validate_frame(const Frame& f) {
  std::vector<std::string> out;
  auto show = [](const StateSet& s) {
    std::string t = "{";
    bool first = true;
    for (size_t i : s.members()) {
      if (!first) t += ",";
      t += std::to_string(i);
      first = false;
    }
    return t + "}";
  };
  if (f.comp.size() != f.states * f.states) {
    out.push_back("composition table has the wrong shape");
    return out;
  }
  for (const StateSet& img : f.comp)
    if (img.size() != f.states) {
      out.push_back("composition image over a different carrier");
      return out;
    }
  for (size_t x = 0; x < f.states; ++x)
    for (size_t y = 0; y < f.states; ++y)
      for (size_t z = 0; z < f.states; ++z) {
        StateSet a = f.compose(f.compose(x, y), StateSet::single(f.states, z));
        StateSet b = f.compose(StateSet::single(f.states, x), f.compose(y, z));
        if (a != b)
          out.push_back("associativity fails at (" + std::to_string(x) + "," +
                        std::to_string(y) + "," + std::to_string(z) + ")");
      }
  if (f.neg_kind == NegKind::Sparse)
    for (const auto& [arg, img] : f.neg) {
      if (arg.size() != f.states || img.size() != f.states) {
        out.push_back("negation entry over a different carrier");
        continue;
      }
      if (arg.intersects(img))
        out.push_back("negation image meets its argument at " + show(arg));
    }
  return out;
}

// Builds the powerset algebra and checks it exhaustively: distributive
// lattice laws, the semigroup law, both residuation equivalences, and
// disjointivity of the lifted negation.
inline std::optional<std::string> complex_algebra_check(const Frame& f) {
  if (f.states > 8) throw std::invalid_argument("carrier too large for the powerset check");
  const size_t n = f.states;
  const uint64_t full = n == 0 ? 0 : (uint64_t(1) << n) - 1;
  const size_t subsets = size_t(1) << n;

  auto show = [&](uint64_t m) {
    std::string t = "{";
    bool first = true;
    for (size_t i = 0; i < n; ++i)
      if ((m >> i) & 1) {
        if (!first) t += ",";
        t += std::to_string(i);
        first = false;
      }
    return t + "}";
  };

  std::vector<uint64_t> single(n * n, 0);
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      for (size_t i : f.compose(x, y).members()) single[x * n + y] |= uint64_t(1) << i;

  std::vector<uint64_t> prod(subsets * subsets, 0);
  for (uint64_t xs = 0; xs < subsets; ++xs)
    for (uint64_t ys = 0; ys < subsets; ++ys) {
      uint64_t acc = 0;
      for (size_t x = 0; x < n; ++x)
        if ((xs >> x) & 1)
          for (size_t y = 0; y < n; ++y)
            if ((ys >> y) & 1) acc |= single[x * n + y];
      prod[xs * subsets + ys] = acc;
    }
  auto dot = [&](uint64_t a, uint64_t b) { return prod[a * subsets + b]; };

  std::vector<uint64_t> under(subsets * subsets, 0), over(subsets * subsets, 0);
  for (uint64_t xs = 0; xs < subsets; ++xs)
    for (uint64_t zs = 0; zs < subsets; ++zs) {
      uint64_t u = 0, o = 0;
      for (size_t s = 0; s < n; ++s) {
        if ((dot(xs, uint64_t(1) << s) & ~zs) == 0) u |= uint64_t(1) << s;
        if ((dot(uint64_t(1) << s, xs) & ~zs) == 0) o |= uint64_t(1) << s;
      }
      under[xs * subsets + zs] = u;
      over[xs * subsets + zs] = o;
    }

  auto meet = [](uint64_t a, uint64_t b) { return a & b; };
  auto join = [](uint64_t a, uint64_t b) { return a | b; };
  for (uint64_t x = 0; x < subsets; ++x)
    for (uint64_t y = 0; y < subsets; ++y) {
      if (meet(x, y) != meet(y, x) || join(x, y) != join(y, x))
        return "lattice commutativity fails at " + show(x) + ", " + show(y);
      if (meet(x, join(x, y)) != x || join(x, meet(x, y)) != x)
        return "lattice absorption fails at " + show(x) + ", " + show(y);
    }
  for (uint64_t x = 0; x < subsets; ++x)
    if (meet(x, full) != x || join(x, 0) != x)
      return "lattice bounds fail at " + show(x);
  for (uint64_t x = 0; x < subsets; ++x)
    for (uint64_t y = 0; y < subsets; ++y)
      for (uint64_t z = 0; z < subsets; ++z) {
        if (meet(x, join(y, z)) != join(meet(x, y), meet(x, z)))
          return "distributivity fails at " + show(x) + ", " + show(y) + ", " + show(z);
        if (dot(dot(x, y), z) != dot(x, dot(y, z)))
          return "semigroup law fails at " + show(x) + ", " + show(y) + ", " + show(z);
        bool below = (dot(x, y) & ~z) == 0;
        if (below != ((y & ~under[x * subsets + z]) == 0))
          return "left residuation fails at " + show(x) + ", " + show(y) + ", " + show(z);
        if (below != ((x & ~over[y * subsets + z]) == 0))
          return "right residuation fails at " + show(x) + ", " + show(y) + ", " + show(z);
      }

  for (uint64_t x = 0; x < subsets; ++x) {
    StateSet xs(n);
    for (size_t i = 0; i < n; ++i)
      if ((x >> i) & 1) xs.set(i);
    if (xs.intersects(f.negate(xs)))
      return "negation not disjointive at " + show(x);
  }
  return std::nullopt;
}

struct CountermodelResult {
  std::optional<Model> model;
  size_t examined = 0;  // composition tables considered
  bool exhausted = true;
};

namespace detail {

// Tries to refute f by choosing sparse negation images on demand, smallest
// bitmask first; choices stay in m.frame.neg on success.
inline bool refute_with_neg(Model& m, const Formula& f) {
  Evaluator e{m, true, {}};
  StateSet sat = e.run(f);
  if (!e.missing) return sat != StateSet::all(m.frame.states);
  StateSet arg = *e.missing;
  StateSet room = arg.complement();
  const size_t n = m.frame.states;
  for (uint64_t img = 0; img < (uint64_t(1) << n); ++img) {
    StateSet image(n);
    for (size_t i = 0; i < n; ++i)
      if ((img >> i) & 1) image.set(i);
    if (!image.subset_of(room)) continue;
    m.frame.neg[arg] = image;
    if (refute_with_neg(m, f)) return true;
    m.frame.neg.erase(arg);
  }
  return false;
}

inline bool next_digits(std::vector<size_t>& digits, size_t base) {
  for (size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

inline bool frame_associative(const Frame& f) {
  for (size_t x = 0; x < f.states; ++x)
    for (size_t y = 0; y < f.states; ++y)
      for (size_t z = 0; z < f.states; ++z)
        if (f.compose(f.compose(x, y), StateSet::single(f.states, z)) !=
            f.compose(StateSet::single(f.states, x), f.compose(y, z)))
          return false;
  return true;
}

inline Frame frame_from_digits(size_t n, const std::vector<size_t>& digits) {
  Frame f = Frame::empty(n);
  for (size_t cell = 0; cell < n * n; ++cell)
    for (size_t i = 0; i < n; ++i)
      if ((digits[cell] >> i) & 1) f.comp[cell].set(i);
  return f;
}

// All comp tables of one size in ascending order, filtered to the
// associative ones, each paired with its position in the raw enumeration.
// found slots hold (table position, refuting model) per worker.
inline std::optional<std::pair<size_t, Model>> scan_tables(
    size_t n, const std::vector<std::string>& names, const Formula& f, size_t first,
    size_t stride, size_t budget) {
  std::vector<size_t> digits(n * n, 0);
  size_t pos = 0;
  const size_t images = size_t(1) << n;
  do {
    if (pos >= budget) return std::nullopt;
    if (pos % stride == first) {
      Frame frame = frame_from_digits(n, digits);
      if (frame_associative(frame)) {
        std::vector<size_t> val(names.size(), 0);
        do {
          Model m;
          m.frame = frame;
          for (size_t a = 0; a < names.size(); ++a) {
            StateSet v(n);
            for (size_t i = 0; i < n; ++i)
              if ((val[a] >> i) & 1) v.set(i);
            m.valuation[names[a]] = v;
          }
          if (refute_with_neg(m, f)) return std::make_pair(pos, std::move(m));
        } while (next_digits(val, images));
      }
    }
    ++pos;
  } while (next_digits(digits, images));
  return std::nullopt;
}

}  // namespace detail

// Enumerates frames by carrier size, then composition tables in ascending
// order, then valuations, choosing sparse negation images on demand; returns
// the first refuting model. The budget caps how many composition tables are
// considered in total. Workers share one table enumeration; the reported
// model does not depend on the worker count.
inline CountermodelResult countermodel_search(const Formula& f, size_t max_size,
                                              size_t budget = size_t(-1), size_t workers = 1) {
  if (max_size < 1) throw std::invalid_argument("need at least one state");
  if (workers < 1) workers = 1;
  CountermodelResult res;
  std::set<std::string> names_set = atoms(f);
  std::vector<std::string> names(names_set.begin(), names_set.end());
  for (size_t n = 1; n <= max_size; ++n) {
    size_t tables = 1;
    bool overflow = false;
    for (size_t cell = 0; cell < n * n; ++cell) {
      size_t next = tables * (size_t(1) << n);
      if (next / (size_t(1) << n) != tables) {
        overflow = true;
        break;
      }
      tables = next;
    }
    size_t remaining = budget - res.examined;
    size_t allowed = overflow ? remaining : std::min(tables, remaining);

    std::optional<std::pair<size_t, Model>> best;
    if (workers == 1) {
      best = detail::scan_tables(n, names, f, 0, 1, allowed);
    } else {
      std::vector<std::future<std::optional<std::pair<size_t, Model>>>> parts;
      for (size_t w = 0; w < workers; ++w)
        parts.push_back(std::async(std::launch::async, detail::scan_tables, n, names,
                                   std::cref(f), w, workers, allowed));
      for (auto& p : parts) {
        auto r = p.get();
        if (r && (!best || r->first < best->first)) best = std::move(r);
      }
    }
    if (best) {
      res.examined += best->first + 1;
      res.model = std::move(best->second);
      res.exhausted = false;
      return res;
    }
    res.examined += allowed;
    if (!overflow && allowed < tables) {
      res.exhausted = false;
      return res;
    }
    if (overflow) {
      res.exhausted = false;
      return res;
    }
  }
  return res;
}

// Frame file: "states n", then "comp x y : z1 z2 ..." for nonempty images
// and "neg {x1,x2} : {y1}" for nonempty negation entries; a model file adds
// "val atom : s1 s2 ...". Omitted entries are empty. "neg complement" selects
// the boolean complement instead of a table.
inline std::string print_model(const Model& m) {
  std::string out = "states " + std::to_string(m.frame.states) + "\n";
  for (size_t x = 0; x < m.frame.states; ++x)
    for (size_t y = 0; y < m.frame.states; ++y) {
      const StateSet& img = m.frame.compose(x, y);
      if (img.none()) continue;
      out += "comp " + std::to_string(x) + " " + std::to_string(y) + " :";
      for (size_t i : img.members()) out += " " + std::to_string(i);
      out += "\n";
    }
  if (m.frame.neg_kind == NegKind::Complement) {
    out += "neg complement\n";
  } else {
    auto braced = [](const StateSet& s) {
      std::string t = "{";
      bool first = true;
      for (size_t i : s.members()) {
        if (!first) t += ",";
        t += std::to_string(i);
        first = false;
      }
      return t + "}";
    };
    for (const auto& [arg, img] : m.frame.neg) {
      if (img.none()) continue;
      out += "neg " + braced(arg) + " : " + braced(img) + "\n";
    }
  }
  for (const auto& [name, v] : m.valuation) {
    out += "val " + name + " :";
    for (size_t i : v.members()) out += " " + std::to_string(i);
    out += "\n";
  }
  return out;
}

inline std::string print_frame(const Frame& f) {
  Model m;
  m.frame = f;
  return print_model(m);
}

namespace detail {

inline StateSet parse_braced_set(const std::string& tok, size_t n, size_t ln) {
  if (tok.size() < 2 || tok.front() != '{' || tok.back() != '}')
    throw ParseError(ln, 1, "expected a braced state set");
  StateSet out(n);
  std::string body = tok.substr(1, tok.size() - 2);
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw ParseError(ln, 1, "empty element in state set");
    size_t idx = 0, used = 0;
    try {
      idx = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw ParseError(ln, 1, "bad state index '" + item + "'");
    }
    if (used != item.size()) throw ParseError(ln, 1, "bad state index '" + item + "'");
    if (idx >= n) throw ParseError(ln, 1, "state index out of range");
    out.set(idx);
  }
  return out;
}

}  // namespace detail

inline Model parse_model(const std::string& text) {
  Model m;
  bool have_states = false;
  std::istringstream in(text);
  std::string line;
  size_t ln = 0;
  auto fail = [&](const std::string& what) { throw ParseError(ln, 1, what); };
  auto state_index = [&](std::istringstream& ls) {
    long long i = -1;
    if (!(ls >> i) || i < 0 || static_cast<size_t>(i) >= m.frame.states)
      fail("state index out of range");
    return static_cast<size_t>(i);
  };
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "states") {
      if (have_states) fail("duplicate states line");
      long long n = 0;
      if (!(ls >> n) || n < 1) fail("bad state count");
      m.frame = Frame::empty(static_cast<size_t>(n));
      have_states = true;
      continue;
    }
    if (!have_states) fail("states line must come first");
    if (word == "comp") {
      size_t x = state_index(ls), y = state_index(ls);
      std::string colon;
      if (!(ls >> colon) || colon != ":") fail("expected ':'");
      StateSet img(m.frame.states);
      long long i;
      while (ls >> i) {
        if (i < 0 || static_cast<size_t>(i) >= m.frame.states) fail("state index out of range");
        img.set(static_cast<size_t>(i));
      }
      if (!ls.eof()) fail("expected state indices");
      m.frame.compose(x, y) = img;
    } else if (word == "neg") {
      std::string tok;
      if (!(ls >> tok)) fail("expected a negation entry");
      if (tok == "complement") {
        m.frame.neg_kind = NegKind::Complement;
        continue;
      }
      StateSet arg = detail::parse_braced_set(tok, m.frame.states, ln);
      std::string colon;
      if (!(ls >> colon) || colon != ":") fail("expected ':'");
      if (!(ls >> tok)) fail("expected an image set");
      m.frame.neg[arg] = detail::parse_braced_set(tok, m.frame.states, ln);
    } else if (word == "val") {
      std::string atom;
      if (!(ls >> atom)) fail("expected an atom name");
      std::string colon;
      if (!(ls >> colon) || colon != ":") fail("expected ':'");
      StateSet v(m.frame.states);
      long long i;
      while (ls >> i) {
        if (i < 0 || static_cast<size_t>(i) >= m.frame.states) fail("state index out of range");
        v.set(static_cast<size_t>(i));
      }
      if (!ls.eof()) fail("expected state indices");
      m.valuation[atom] = v;
    } else {
      fail("unknown directive '" + word + "'");
    }
  }
  if (!have_states) throw ParseError(ln, 1, "missing states line");
  return m;
}

inline Frame parse_frame(const std::string& text) { return parse_model(text).frame; }

}  // namespace biwb
