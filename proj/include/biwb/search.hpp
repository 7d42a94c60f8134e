#pragma once
// Bounded backward proof search. Works on canonical sequents; closure steps
// and invertible rules are applied eagerly, the genuinely branching choices
// (disjunction sides, splits, implication arguments, weakening, contraction)
// are tried depth first with backtracking. Branches prune on repeated
// sequents; contraction has a per-branch allowance. The produced object
// always replays through check_proof.

#include <optional>
#include <vector>

#include "bunch.hpp"
#include "checker.hpp"
#include "formula.hpp"
#include "proof.hpp"

namespace biwb {

struct SearchLimits {
  size_t max_nodes = 200000;      // total expansions before giving up
  size_t max_depth = 64;          // rule applications along one branch
  size_t max_contractions = 1;    // explicit contractions along one branch
};

struct SearchResult {
  enum class Outcome { Found, Exhausted, BudgetExhausted };
  Outcome outcome = Outcome::Exhausted;
  std::optional<Proof> proof;
  size_t nodes_expanded = 0;
};

namespace detail {

struct BudgetOut {};

// Paths to every leaf / every non-unit node of a canonical bunch.
inline void leaf_paths(const Bunch& b, Path& cur, std::vector<std::pair<Path, Formula>>& out) {
  if (b.kind() == BKind::Leaf) {
    out.emplace_back(cur, b.formula());
    return;
  }
  if (b.kind() != BKind::Comma && b.kind() != BKind::Semi) return;
  for (size_t i = 0; i < b.children().size(); ++i) {
    cur.push_back(i);
    leaf_paths(b.children()[i], cur, out);
    cur.pop_back();
  }
}

inline void node_paths(const Bunch& b, Path& cur, std::vector<std::pair<Path, Bunch>>& out) {
  if (b.kind() == BKind::MultUnit || b.kind() == BKind::AddUnit) return;
  out.emplace_back(cur, b);
  if (b.kind() == BKind::Leaf) return;
  for (size_t i = 0; i < b.children().size(); ++i) {
    cur.push_back(i);
    node_paths(b.children()[i], cur, out);
    cur.pop_back();
  }
}

class Searcher {
public:
  Searcher(Mode mode, SearchLimits lim) : mode_(mode), lim_(lim) {}

  size_t nodes = 0;
  bool incomplete = false;

  std::optional<Proof> run(const Sequent& c) {
    branch_.push_back(c);
    auto r = search(c, 0, 0);
    branch_.pop_back();
    return r;
  }

private:
  std::optional<Proof> search(const Sequent& c, size_t depth, size_t used_c) {
    if (++nodes > lim_.max_nodes) throw BudgetOut{};
    const Bunch& A = c.antecedent;
    const Formula& s = c.succedent;

    // --- closures ---
    if (A.kind() == BKind::Leaf && A.formula() == s)
      return Proof::make(RuleTag::Ax, c);
    std::vector<std::pair<Path, Formula>> leaves;
    {
      Path cur;
      leaf_paths(A, cur, leaves);
    }
    for (const auto& [path, f] : leaves)
      if (f.kind() == FKind::Bot)
        return Proof::make(RuleTag::BotL, c, {}, path);
    if (A.kind() == BKind::Semi) {
      for (size_t i = 0; i < A.children().size(); ++i) {
        const Bunch& ch = A.children()[i];
        bool hit = (ch.kind() == BKind::Leaf && ch.formula() == s) ||
                   (ch.kind() == BKind::MultUnit && s.kind() == FKind::One);
        if (!hit) continue;
        std::vector<Bunch> rest = A.children();
        rest.erase(rest.begin() + long(i));
        Proof leaf = ch.kind() == BKind::Leaf
                         ? Proof::make(RuleTag::Ax, {ch, s})
                         : Proof::make(RuleTag::OneR, {ch, s});
        return Proof::make(RuleTag::W, c, {std::move(leaf)}, Path{},
                           join(std::move(rest), BKind::Semi));
      }
    }
    if (s.kind() == FKind::One && A.kind() == BKind::MultUnit)
      return Proof::make(RuleTag::OneR, c);
    if (s.kind() == FKind::Top) {
      if (A.kind() == BKind::AddUnit) return Proof::make(RuleTag::TopR, c);
      Proof t = Proof::make(RuleTag::TopR, {Bunch::add_unit(), s});
      return Proof::make(RuleTag::W, c, {std::move(t)}, Path{}, A);
    }

    if (depth >= lim_.max_depth) {
      incomplete = true;
      return std::nullopt;
    }

    // --- invertible rules ---
    for (const auto& [path, f] : leaves) {
      RuleTag t;
      Bunch repl;
      switch (f.kind()) {
        case FKind::One: t = RuleTag::OneL; repl = Bunch::mult_unit(); break;
        case FKind::Top: t = RuleTag::TopL; repl = Bunch::add_unit(); break;
        case FKind::And:
          t = RuleTag::AndL;
          repl = Bunch::semi(Bunch::leaf(f.left()), Bunch::leaf(f.right()));
          break;
        case FKind::Star:
          t = RuleTag::StarL;
          repl = Bunch::comma(Bunch::leaf(f.left()), Bunch::leaf(f.right()));
          break;
        default: continue;
      }
      auto pr = goal({canonical(replace_at(A, path, repl), mode_), s}, depth, used_c);
      if (!pr) return std::nullopt;
      return Proof::make(t, c, {std::move(*pr)}, path);
    }
    if (s.kind() == FKind::Imp) {
      std::vector<Bunch> ps = parts(A, BKind::Semi);
      ps.push_back(Bunch::leaf(s.left()));
      auto pr = goal({canonical(join(std::move(ps), BKind::Semi), mode_), s.right()}, depth, used_c);
      if (!pr) return std::nullopt;
      return Proof::make(RuleTag::ImpR, c, {std::move(*pr)});
    }
    if (s.kind() == FKind::Wand || s.kind() == FKind::Ldiv || s.kind() == FKind::Rdiv) {
      Formula arg = s.kind() == FKind::Rdiv ? s.right() : s.left();
      Formula res = s.kind() == FKind::Rdiv ? s.left() : s.right();
      std::vector<Bunch> ps;
      if (s.kind() == FKind::Ldiv) {
        ps.push_back(Bunch::leaf(arg));
        auto ap = parts(A, BKind::Comma);
        ps.insert(ps.end(), ap.begin(), ap.end());
      } else {
        ps = parts(A, BKind::Comma);
        ps.push_back(Bunch::leaf(arg));
      }
      auto pr = goal({canonical(join(std::move(ps), BKind::Comma), mode_), res}, depth, used_c);
      if (!pr) return std::nullopt;
      return Proof::make(RuleTag::WandR, c, {std::move(*pr)});
    }
    for (const auto& [path, f] : leaves) {
      if (f.kind() != FKind::Or) continue;
      auto p0 = goal({canonical(replace_at(A, path, Bunch::leaf(f.left())), mode_), s}, depth, used_c);
      if (!p0) return std::nullopt;
      auto p1 = goal({canonical(replace_at(A, path, Bunch::leaf(f.right())), mode_), s}, depth, used_c);
      if (!p1) return std::nullopt;
      return Proof::make(RuleTag::OrL, c, {std::move(*p0), std::move(*p1)}, path);
    }

    // --- choices ---
    if (s.kind() == FKind::Or) {
      if (auto pr = goal({A, s.left()}, depth, used_c))
        return Proof::make(RuleTag::OrR1, c, {std::move(*pr)});
      if (auto pr = goal({A, s.right()}, depth, used_c))
        return Proof::make(RuleTag::OrR2, c, {std::move(*pr)});
    }
    if (s.kind() == FKind::And) {
      // shared-context split: duplicate the antecedent, give one copy to
      // each side (the duplication is bookkeeping, not a searched step)
      auto p0 = goal({A, s.left()}, depth, used_c);
      auto p1 = p0 ? goal({A, s.right()}, depth, used_c) : std::optional<Proof>{};
      if (p0 && p1) {
        std::vector<Bunch> ps = parts(A, BKind::Semi);
        if (ps.empty()) {
          return Proof::make(RuleTag::AndR, c, {std::move(*p0), std::move(*p1)});
        }
        std::vector<Bunch> dup = ps;
        dup.insert(dup.end(), ps.begin(), ps.end());
        Sequent mid{canonical(join(std::move(dup), BKind::Semi), mode_), s};
        Proof split = Proof::make(RuleTag::AndR, mid, {std::move(*p0), std::move(*p1)});
        return Proof::make(RuleTag::C, c, {std::move(split)}, Path{}, A);
      }
    }
    if (s.kind() == FKind::Star) {
      std::vector<Bunch> ps = parts(A, BKind::Comma);
      if (mode_ == Mode::NonCommutative) {
        for (size_t k = 0; k <= ps.size(); ++k) {
          Bunch l = join(std::vector<Bunch>(ps.begin(), ps.begin() + long(k)), BKind::Comma);
          Bunch r = join(std::vector<Bunch>(ps.begin() + long(k), ps.end()), BKind::Comma);
          auto p0 = goal({l, s.left()}, depth, used_c);
          if (!p0) continue;
          auto p1 = goal({r, s.right()}, depth, used_c);
          if (!p1) continue;
          return Proof::make(RuleTag::StarR, c, {std::move(*p0), std::move(*p1)});
        }
      } else if (ps.size() <= 16) {
        for (size_t mask = 0; mask < (size_t(1) << ps.size()); ++mask) {
          std::vector<Bunch> l, r;
          for (size_t i = 0; i < ps.size(); ++i)
            (mask >> i & 1 ? l : r).push_back(ps[i]);
          auto p0 = goal({canonical(join(std::move(l), BKind::Comma), mode_), s.left()}, depth, used_c);
          if (!p0) continue;
          auto p1 = goal({canonical(join(std::move(r), BKind::Comma), mode_), s.right()}, depth, used_c);
          if (!p1) continue;
          return Proof::make(RuleTag::StarR, c, {std::move(*p0), std::move(*p1)});
        }
      } else {
        incomplete = true;
      }
    }
    for (const auto& [path, f] : leaves) {
      bool wand = f.kind() == FKind::Wand || f.kind() == FKind::Ldiv || f.kind() == FKind::Rdiv;
      bool imp = f.kind() == FKind::Imp;
      if (!wand && !imp) continue;
      RuleTag t = wand ? RuleTag::WandL : RuleTag::ImpL;
      BKind sep = wand ? BKind::Comma : BKind::Semi;
      Formula arg = f.kind() == FKind::Rdiv ? f.right() : f.left();
      Formula res = f.kind() == FKind::Rdiv ? f.left() : f.right();
      Bunch resleaf = Bunch::leaf(res);

      auto attempt = [&](const Bunch& delta, const Bunch& rewritten) -> std::optional<Proof> {
        auto p0 = goal({canonical(delta, mode_), arg}, depth, used_c);
        if (!p0) return std::nullopt;
        auto p1 = goal({canonical(rewritten, mode_), s}, depth, used_c);
        if (!p1) return std::nullopt;
        return Proof::make(t, c, {std::move(*p0), std::move(*p1)}, path);
      };

      if (path.empty() || node_at(A, Path(path.begin(), path.end() - 1))->kind() != sep) {
        if (auto pr = attempt(unit_of(sep), replace_at(A, path, resleaf))) return pr;
        continue;
      }
      Path pp(path.begin(), path.end() - 1);
      Bunch parent = *node_at(A, pp);
      std::vector<Bunch> ch = parent.children();
      size_t at = path.back();
      if (sep == BKind::Comma && mode_ == Mode::NonCommutative) {
        bool right = f.kind() == FKind::Rdiv;
        size_t room = right ? ch.size() - 1 - at : at;
        for (size_t k = 0; k <= room; ++k) {
          size_t lo = right ? at : at - k;           // first replaced index
          size_t hi = right ? at + k : at;           // last replaced index
          std::vector<Bunch> dp(ch.begin() + long(right ? at + 1 : lo),
                                ch.begin() + long(right ? hi + 1 : at));
          std::vector<Bunch> nw(ch.begin(), ch.begin() + long(lo));
          nw.push_back(resleaf);
          nw.insert(nw.end(), ch.begin() + long(hi) + 1, ch.end());
          if (auto pr = attempt(join(std::move(dp), sep), replace_at(A, pp, join(std::move(nw), sep))))
            return pr;
        }
      } else {
        std::vector<Bunch> sib = ch;
        sib.erase(sib.begin() + long(at));
        if (sib.size() <= 16) {
          for (size_t mask = 0; mask < (size_t(1) << sib.size()); ++mask) {
            std::vector<Bunch> dp, nw;
            for (size_t i = 0; i < sib.size(); ++i)
              (mask >> i & 1 ? dp : nw).push_back(sib[i]);
            nw.push_back(resleaf);
            if (auto pr = attempt(join(std::move(dp), sep), replace_at(A, pp, join(std::move(nw), sep))))
              return pr;
          }
        } else {
          incomplete = true;
        }
      }
    }
    {
      // weakening a part away, anywhere
      std::vector<std::pair<Path, Bunch>> nodes_list;
      Path cur;
      node_paths(A, cur, nodes_list);
      for (const auto& [path, n] : nodes_list) {
        if (path.empty() && n.kind() == BKind::Leaf) continue;  // would strand the goal
        auto pr = goal({canonical(replace_at(A, path, Bunch::add_unit()), mode_), s}, depth, used_c);
        if (pr)
          return Proof::make(RuleTag::W, c, {std::move(*pr)}, path, n);
      }
    }
    // explicit contraction, within the branch allowance (the allowance is
    // part of the strategy: exhausting it still counts as a settled search)
    if (used_c < lim_.max_contractions) {
      std::vector<std::pair<Path, Bunch>> nodes_list;
      Path cur;
      node_paths(A, cur, nodes_list);
      for (const auto& [path, n] : nodes_list) {
        std::vector<Bunch> np = parts(n, BKind::Semi);
        std::vector<Bunch> dup = np;
        dup.insert(dup.end(), np.begin(), np.end());
        auto pr = goal({canonical(replace_at(A, path, join(std::move(dup), BKind::Semi)), mode_), s},
                       depth, used_c + 1);
        if (pr)
          return Proof::make(RuleTag::C, c, {std::move(*pr)}, path, n);
      }
    }
    return std::nullopt;
  }

  Mode mode_;
  SearchLimits lim_;
  std::vector<Sequent> branch_;

  std::optional<Proof> goal(const Sequent& q, size_t depth, size_t used_c) {
    for (const auto& seen : branch_)
      if (seen == q) return std::nullopt;
    branch_.push_back(q);
    auto r = search(q, depth + 1, used_c);
    branch_.pop_back();
    return r;
  }
};

}  // namespace detail

inline SearchResult prove_bounded(const Sequent& goal, Mode mode, SearchLimits limits = {}) {
  detail::Searcher s(mode, limits);
  SearchResult out;
  Sequent c = canonical(goal, mode);
  try {
    auto pr = s.run(c);
    if (pr) {
      out.outcome = SearchResult::Outcome::Found;
      // keep the goal as written on the root node
      out.proof = Proof::make(pr->tag(), goal, pr->premises(), pr->path(), pr->param());
    } else {
      out.outcome = s.incomplete ? SearchResult::Outcome::BudgetExhausted
                                 : SearchResult::Outcome::Exhausted;
    }
  } catch (const detail::BudgetOut&) {
    out.outcome = SearchResult::Outcome::BudgetExhausted;
  }
  out.nodes_expanded = s.nodes;
  return out;
}

}  // namespace biwb
