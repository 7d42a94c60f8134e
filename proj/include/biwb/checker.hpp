#pragma once
// Certificate checking. Every node is replayed: from the canonical form of
// its conclusion and its rule parameters the checker computes what each
// premise must say and compares, so a certificate is accepted exactly when
// every step is a correct rule instance.
//
// Violation codes:
//   open-not-allowed   an open leaf in a certificate that must be complete
//   premise-count      wrong number of premises for the rule
//   path-range         position does not resolve in the canonical antecedent
//   principal-mismatch position does not hold the rule's principal formula
//   succedent-mismatch succedent is not the rule's principal connective
//   axiom-mismatch     axiom side condition fails (ax, one_r, top_r)
//   portion-mismatch   the named part is not present at the position
//   antecedent-split   two-premise antecedents do not recombine (star_r, and_r)
//   premise-mismatch   a premise differs from the one the rule demands

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "bunch.hpp"
#include "formula.hpp"
#include "proof.hpp"

namespace biwb {

struct Violation {
  std::vector<size_t> at;  // premise indices from the root to the faulty node
  std::string code;
  std::string detail;
};

inline std::optional<Bunch> node_at(const Bunch& b, const Path& path, size_t from = 0) {
  if (from == path.size()) return b;
  if (b.kind() != BKind::Comma && b.kind() != BKind::Semi) return std::nullopt;
  if (path[from] >= b.children().size()) return std::nullopt;
  return node_at(b.children()[path[from]], path, from + 1);
}

inline Bunch replace_at(const Bunch& b, const Path& path, const Bunch& repl, size_t from = 0) {
  if (from == path.size()) return repl;
  std::vector<Bunch> ch = b.children();
  ch[path[from]] = replace_at(ch[path[from]], path, repl, from + 1);
  return b.kind() == BKind::Comma ? Bunch::comma(std::move(ch)) : Bunch::semi(std::move(ch));
}

inline std::optional<std::vector<Bunch>> multiset_subtract(std::vector<Bunch> from,
                                                           const std::vector<Bunch>& take) {
  for (const auto& t : take) {
    auto it = std::find(from.begin(), from.end(), t);
    if (it == from.end()) return std::nullopt;
    from.erase(it);
  }
  return from;
}

class Checker {
public:
  Checker(Mode mode, bool allow_open) : mode_(mode), allow_open_(allow_open) {}

  std::vector<Violation> violations;

  void walk(const Proof& p) {
    check_node(p);
    for (size_t i = 0; i < p.premises().size(); ++i) {
      at_.push_back(i);
      walk(p.premises()[i]);
      at_.pop_back();
    }
  }

private:
  Mode mode_;
  bool allow_open_;
  std::vector<size_t> at_;

  void report(const char* code, std::string detail) {
    violations.push_back({at_, code, std::move(detail)});
  }

  Sequent premise(const Proof& p, size_t i) const {
    return canonical(p.premises()[i].conclusion(), mode_);
  }

  bool want(const Proof& p, size_t i, const Sequent& expected) {
    Sequent got = premise(p, i);
    if (got == expected) return true;
    report("premise-mismatch", std::string(tag_name(p.tag())) + " premise " + std::to_string(i) +
                                   ": expected '" + to_text(expected) + "', got '" + to_text(got) +
                                   "'");
    return false;
  }

  // The leaf the rule acts on, or nothing after reporting.
  std::optional<Bunch> principal_leaf(const Proof& p, const Bunch& ante) {
    auto n = node_at(ante, *p.path());
    if (!n) {
      report("path-range", std::string(tag_name(p.tag())) + ": position " + path_text(*p.path()) +
                               " does not exist in '" + to_text(ante) + "'");
      return std::nullopt;
    }
    if (n->kind() != BKind::Leaf) {
      report("principal-mismatch", std::string(tag_name(p.tag())) + ": position " +
                                       path_text(*p.path()) + " holds '" + to_text(*n) +
                                       "', not a single formula");
      return std::nullopt;
    }
    return n;
  }

  // All bunches obtainable from node by replacing a portion congruent to
  // delta (read as a sep-portion) with repl. Ordered commas admit several
  // contiguous positions; everything else has at most one candidate.
  void portion_candidates(const Bunch& node, const Bunch& delta, const Bunch& repl, BKind sep,
                          std::vector<Bunch>& out) const {
    std::vector<Bunch> dp = parts(delta, sep);
    std::vector<Bunch> np = parts(node, sep);
    if (dp.empty()) {
      if (sep == BKind::Comma && mode_ == Mode::NonCommutative) {
        for (size_t i = 0; i <= np.size(); ++i) {
          std::vector<Bunch> v(np.begin(), np.begin() + long(i));
          v.push_back(repl);
          v.insert(v.end(), np.begin() + long(i), np.end());
          out.push_back(join(std::move(v), sep));
        }
      } else {
        np.push_back(repl);
        out.push_back(join(std::move(np), sep));
      }
      return;
    }
    if (sep == BKind::Semi || mode_ == Mode::Commutative) {
      auto rem = multiset_subtract(np, dp);
      if (rem) {
        rem->push_back(repl);
        out.push_back(join(std::move(*rem), sep));
      }
      return;
    }
    for (size_t i = 0; i + dp.size() <= np.size(); ++i) {
      if (!std::equal(np.begin() + long(i), np.begin() + long(i + dp.size()), dp.begin())) continue;
      std::vector<Bunch> v(np.begin(), np.begin() + long(i));
      v.push_back(repl);
      v.insert(v.end(), np.begin() + long(i + dp.size()), np.end());
      out.push_back(join(std::move(v), sep));
    }
  }

  void check_node(const Proof& p) {
    RuleTag t = p.tag();
    if (t == RuleTag::Open) {
      if (!allow_open_)
        report("open-not-allowed", "open leaf '" + to_text(p.conclusion()) + "'");
      return;
    }
    if (p.premises().size() != rule_arity(t)) {
      report("premise-count", std::string(tag_name(t)) + " takes " +
                                  std::to_string(rule_arity(t)) + " premises, got " +
                                  std::to_string(p.premises().size()));
      return;
    }
    Sequent c = canonical(p.conclusion(), mode_);
    const Bunch& A = c.antecedent;
    const Formula& s = c.succedent;

    switch (t) {
      case RuleTag::Ax:
        if (!(A.kind() == BKind::Leaf && A.formula() == s))
          report("axiom-mismatch", "ax: '" + to_text(c) + "' is not of the form f => f");
        return;

      case RuleTag::Equiv:
        want(p, 0, c);
        return;

      case RuleTag::OneR:
        if (s.kind() != FKind::One)
          report("succedent-mismatch", "one_r: succedent is not the empty-bunch unit");
        else if (A.kind() != BKind::MultUnit)
          report("axiom-mismatch", "one_r: antecedent '" + to_text(A) + "' is not e*");
        return;

      case RuleTag::TopR:
        if (s.kind() != FKind::Top)
          report("succedent-mismatch", "top_r: succedent is not top");
        else if (A.kind() != BKind::AddUnit)
          report("axiom-mismatch", "top_r: antecedent '" + to_text(A) + "' is not e+");
        return;

      case RuleTag::BotL: {
        auto L = principal_leaf(p, A);
        if (L && L->formula().kind() != FKind::Bot)
          report("principal-mismatch", "bot_l: '" + to_text(*L) + "' is not bot");
        return;
      }

      case RuleTag::W: {
        auto N = node_at(A, *p.path());
        if (!N) {
          report("path-range", "w: position " + path_text(*p.path()) + " does not exist in '" +
                                   to_text(A) + "'");
          return;
        }
        Bunch d = canonical(normalize_leaves(*p.param(), mode_), mode_);
        auto rem = multiset_subtract(parts(*N, BKind::Semi), parts(d, BKind::Semi));
        if (!rem) {
          report("portion-mismatch",
                 "w: '" + to_text(d) + "' is not a semicolon part of '" + to_text(*N) + "'");
          return;
        }
        Bunch e = canonical(replace_at(A, *p.path(), join(std::move(*rem), BKind::Semi)), mode_);
        want(p, 0, {e, s});
        return;
      }

      case RuleTag::C: {
        auto N = node_at(A, *p.path());
        if (!N) {
          report("path-range", "c: position " + path_text(*p.path()) + " does not exist in '" +
                                   to_text(A) + "'");
          return;
        }
        Bunch d = canonical(normalize_leaves(*p.param(), mode_), mode_);
        std::vector<Bunch> dp = parts(d, BKind::Semi);
        std::vector<Bunch> np = parts(*N, BKind::Semi);
        if (!multiset_subtract(np, dp)) {
          report("portion-mismatch",
                 "c: '" + to_text(d) + "' is not a semicolon part of '" + to_text(*N) + "'");
          return;
        }
        np = parts(*N, BKind::Semi);
        np.insert(np.end(), dp.begin(), dp.end());
        Bunch e = canonical(replace_at(A, *p.path(), join(std::move(np), BKind::Semi)), mode_);
        want(p, 0, {e, s});
        return;
      }

      case RuleTag::Cut: {
        auto N = node_at(A, *p.path());
        if (!N) {
          report("path-range", "cut: position " + path_text(*p.path()) + " does not exist in '" +
                                   to_text(A) + "'");
          return;
        }
        Sequent m = premise(p, 0);
        Bunch repl = Bunch::leaf(m.succedent);
        std::vector<Bunch> cands;
        portion_candidates(*N, m.antecedent, repl, BKind::Comma, cands);
        portion_candidates(*N, m.antecedent, repl, BKind::Semi, cands);
        if (cands.empty()) {
          report("portion-mismatch", "cut: '" + to_text(m.antecedent) +
                                         "' is not a part of '" + to_text(*N) + "'");
          return;
        }
        Sequent got = premise(p, 1);
        for (const auto& cand : cands)
          if (got == Sequent{canonical(replace_at(A, *p.path(), cand), mode_), s}) return;
        report("premise-mismatch",
               "cut premise 1: expected '" +
                   to_text(Sequent{canonical(replace_at(A, *p.path(), cands[0]), mode_), s}) +
                   "', got '" + to_text(got) + "'");
        return;
      }

      case RuleTag::OneL: {
        auto L = principal_leaf(p, A);
        if (!L) return;
        if (L->formula().kind() != FKind::One) {
          report("principal-mismatch", "one_l: '" + to_text(*L) + "' is not the unit");
          return;
        }
        want(p, 0, {canonical(replace_at(A, *p.path(), Bunch::mult_unit()), mode_), s});
        return;
      }

      case RuleTag::TopL: {
        auto L = principal_leaf(p, A);
        if (!L) return;
        if (L->formula().kind() != FKind::Top) {
          report("principal-mismatch", "top_l: '" + to_text(*L) + "' is not top");
          return;
        }
        want(p, 0, {canonical(replace_at(A, *p.path(), Bunch::add_unit()), mode_), s});
        return;
      }

      case RuleTag::StarL: {
        auto L = principal_leaf(p, A);
        if (!L) return;
        if (L->formula().kind() != FKind::Star) {
          report("principal-mismatch", "star_l: '" + to_text(*L) + "' is not a product");
          return;
        }
        Bunch r = Bunch::comma(Bunch::leaf(L->formula().left()), Bunch::leaf(L->formula().right()));
        want(p, 0, {canonical(replace_at(A, *p.path(), r), mode_), s});
        return;
      }

      case RuleTag::AndL: {
        auto L = principal_leaf(p, A);
        if (!L) return;
        if (L->formula().kind() != FKind::And) {
          report("principal-mismatch", "and_l: '" + to_text(*L) + "' is not a conjunction");
          return;
        }
        Bunch r = Bunch::semi(Bunch::leaf(L->formula().left()), Bunch::leaf(L->formula().right()));
        want(p, 0, {canonical(replace_at(A, *p.path(), r), mode_), s});
        return;
      }

      case RuleTag::OrL: {
        auto L = principal_leaf(p, A);
        if (!L) return;
        if (L->formula().kind() != FKind::Or) {
          report("principal-mismatch", "or_l: '" + to_text(*L) + "' is not a disjunction");
          return;
        }
        want(p, 0, {canonical(replace_at(A, *p.path(), Bunch::leaf(L->formula().left())), mode_), s});
        want(p, 1, {canonical(replace_at(A, *p.path(), Bunch::leaf(L->formula().right())), mode_), s});
        return;
      }

      case RuleTag::WandL:
      case RuleTag::ImpL: {
        auto L = principal_leaf(p, A);
        if (!L) return;
        FKind k = L->formula().kind();
        bool wand = t == RuleTag::WandL;
        bool ok = wand ? (k == FKind::Wand || k == FKind::Ldiv || k == FKind::Rdiv)
                       : k == FKind::Imp;
        if (!ok) {
          report("principal-mismatch", std::string(tag_name(t)) + ": '" + to_text(*L) +
                                           "' is not the rule's implication");
          return;
        }
        Formula arg = k == FKind::Rdiv ? L->formula().right() : L->formula().left();
        Formula res = k == FKind::Rdiv ? L->formula().left() : L->formula().right();
        Sequent m = premise(p, 0);
        if (!(m.succedent == arg)) {
          report("premise-mismatch", std::string(tag_name(t)) + " premise 0 must conclude '" +
                                         to_text(arg) + "', got '" + to_text(m.succedent) + "'");
          return;
        }
        BKind sep = wand ? BKind::Comma : BKind::Semi;
        std::vector<Bunch> dp = parts(m.antecedent, sep);
        Bunch e;
        if (p.path()->empty() || node_at(A, Path(p.path()->begin(), p.path()->end() - 1))->kind() != sep) {
          if (!dp.empty()) {
            report("portion-mismatch", std::string(tag_name(t)) + ": '" + to_text(m.antecedent) +
                                           "' has no place beside the principal formula");
            return;
          }
          e = canonical(replace_at(A, *p.path(), Bunch::leaf(res)), mode_);
        } else {
          Path pp(p.path()->begin(), p.path()->end() - 1);
          Bunch parent = *node_at(A, pp);
          std::vector<Bunch> ch = parent.children();
          size_t i = p.path()->back();
          std::optional<std::vector<Bunch>> nw;
          if (sep == BKind::Semi || mode_ == Mode::Commutative) {
            std::vector<Bunch> rest = ch;
            rest.erase(rest.begin() + long(i));
            auto rem = multiset_subtract(std::move(rest), dp);
            if (rem) {
              rem->push_back(Bunch::leaf(res));
              nw = std::move(rem);
            }
          } else if (k == FKind::Rdiv) {
            // argument sits to the right of the principal formula
            if (i + dp.size() < ch.size() &&
                std::equal(dp.begin(), dp.end(), ch.begin() + long(i) + 1)) {
              std::vector<Bunch> v(ch.begin(), ch.begin() + long(i));
              v.push_back(Bunch::leaf(res));
              v.insert(v.end(), ch.begin() + long(i + dp.size()) + 1, ch.end());
              nw = std::move(v);
            }
          } else {
            // argument sits to the left of the principal formula
            if (i >= dp.size() &&
                std::equal(dp.begin(), dp.end(), ch.begin() + long(i - dp.size()))) {
              std::vector<Bunch> v(ch.begin(), ch.begin() + long(i - dp.size()));
              v.push_back(Bunch::leaf(res));
              v.insert(v.end(), ch.begin() + long(i) + 1, ch.end());
              nw = std::move(v);
            }
          }
          if (!nw) {
            report("portion-mismatch", std::string(tag_name(t)) + ": '" + to_text(m.antecedent) +
                                           "' is not beside the principal formula in '" +
                                           to_text(parent) + "'");
            return;
          }
          e = canonical(replace_at(A, pp, join(std::move(*nw), sep)), mode_);
        }
        want(p, 1, {e, s});
        return;
      }

      case RuleTag::StarR:
      case RuleTag::AndR: {
        bool star = t == RuleTag::StarR;
        if (s.kind() != (star ? FKind::Star : FKind::And)) {
          report("succedent-mismatch", std::string(tag_name(t)) + ": succedent '" + to_text(s) +
                                           "' has the wrong connective");
          return;
        }
        Sequent m0 = premise(p, 0), m1 = premise(p, 1);
        bool ok0 = m0.succedent == s.left(), ok1 = m1.succedent == s.right();
        if (!ok0 || !ok1) {
          report("premise-mismatch", std::string(tag_name(t)) + ": premises must conclude '" +
                                         to_text(s.left()) + "' and '" + to_text(s.right()) + "'");
          return;
        }
        BKind sep = star ? BKind::Comma : BKind::Semi;
        std::vector<Bunch> ps = parts(m0.antecedent, sep);
        std::vector<Bunch> qs = parts(m1.antecedent, sep);
        ps.insert(ps.end(), qs.begin(), qs.end());
        if (!(canonical(join(std::move(ps), sep), mode_) == A))
          report("antecedent-split", std::string(tag_name(t)) + ": '" + to_text(m0.antecedent) +
                                         "' and '" + to_text(m1.antecedent) +
                                         "' do not recombine to '" + to_text(A) + "'");
        return;
      }

      case RuleTag::OrR1:
      case RuleTag::OrR2: {
        if (s.kind() != FKind::Or) {
          report("succedent-mismatch",
                 std::string(tag_name(t)) + ": succedent '" + to_text(s) + "' is not a disjunction");
          return;
        }
        want(p, 0, {A, t == RuleTag::OrR1 ? s.left() : s.right()});
        return;
      }

      case RuleTag::ImpR: {
        if (s.kind() != FKind::Imp) {
          report("succedent-mismatch",
                 "imp_r: succedent '" + to_text(s) + "' is not an implication");
          return;
        }
        std::vector<Bunch> ps = parts(A, BKind::Semi);
        ps.push_back(Bunch::leaf(s.left()));
        want(p, 0, {canonical(join(std::move(ps), BKind::Semi), mode_), s.right()});
        return;
      }

      case RuleTag::WandR: {
        FKind k = s.kind();
        if (k != FKind::Wand && k != FKind::Ldiv && k != FKind::Rdiv) {
          report("succedent-mismatch",
                 "wand_r: succedent '" + to_text(s) + "' is not a wand or division");
          return;
        }
        Formula arg = k == FKind::Rdiv ? s.right() : s.left();
        Formula res = k == FKind::Rdiv ? s.left() : s.right();
        std::vector<Bunch> ps;
        if (k == FKind::Ldiv) {
          ps.push_back(Bunch::leaf(arg));
          auto ap = parts(A, BKind::Comma);
          ps.insert(ps.end(), ap.begin(), ap.end());
        } else {
          ps = parts(A, BKind::Comma);
          ps.push_back(Bunch::leaf(arg));
        }
        want(p, 0, {canonical(join(std::move(ps), BKind::Comma), mode_), res});
        return;
      }

      case RuleTag::Open:
        return;  // handled above
    }
  }
};

inline std::vector<Violation> check_proof(const Proof& p, Mode mode, bool allow_open = false) {
  Checker c(mode, allow_open);
  c.walk(p);
  return c.violations;
}

}  // namespace biwb
