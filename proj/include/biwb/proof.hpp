#pragma once
// Proof objects and their certificate text format.
//
// A proof node is one rule application:
//
//   node := "(" tag [path] [param] sequent node* ")"
//   path := "@" digits ("." digits)*        index into the canonical antecedent
//   param := "{" bunch "}"                  weakened or duplicated part
//
// Left rules carry a path to the principal position; w and c also carry the
// bunch they drop or duplicate. Sequents are stored as written, so printing a
// parsed certificate reproduces the same object bit for bit. The pseudo-rule
// "open" marks an unfinished branch.

#include <optional>
#include <string>
#include <vector>

#include "bunch.hpp"
#include "formula.hpp"
#include "parse.hpp"

namespace biwb {

enum class RuleTag {
  Ax, Equiv, W, C, Cut,
  BotL, OneL, OneR, TopL, TopR,
  StarL, StarR, WandL, WandR,
  OrR1, OrR2, AndL, AndR,
  ImpL, ImpR, OrL,
  Open,
};

inline const char* tag_name(RuleTag t) {
  switch (t) {
    case RuleTag::Ax: return "ax";
    case RuleTag::Equiv: return "equiv";
    case RuleTag::W: return "w";
    case RuleTag::C: return "c";
    case RuleTag::Cut: return "cut";
    case RuleTag::BotL: return "bot_l";
    case RuleTag::OneL: return "one_l";
    case RuleTag::OneR: return "one_r";
    case RuleTag::TopL: return "top_l";
    case RuleTag::TopR: return "top_r";
    case RuleTag::StarL: return "star_l";
    case RuleTag::StarR: return "star_r";
    case RuleTag::WandL: return "wand_l";
    case RuleTag::WandR: return "wand_r";
    case RuleTag::OrR1: return "or_r1";
    case RuleTag::OrR2: return "or_r2";
    case RuleTag::AndL: return "and_l";
    case RuleTag::AndR: return "and_r";
    case RuleTag::ImpL: return "imp_l";
    case RuleTag::ImpR: return "imp_r";
    case RuleTag::OrL: return "or_l";
    case RuleTag::Open: return "open";
  }
  return "?";
}

inline std::optional<RuleTag> tag_from_name(const std::string& s) {
  static const RuleTag all[] = {
      RuleTag::Ax, RuleTag::Equiv, RuleTag::W, RuleTag::C, RuleTag::Cut,
      RuleTag::BotL, RuleTag::OneL, RuleTag::OneR, RuleTag::TopL, RuleTag::TopR,
      RuleTag::StarL, RuleTag::StarR, RuleTag::WandL, RuleTag::WandR,
      RuleTag::OrR1, RuleTag::OrR2, RuleTag::AndL, RuleTag::AndR,
      RuleTag::ImpL, RuleTag::ImpR, RuleTag::OrL, RuleTag::Open,
  };
  for (RuleTag t : all)
    if (s == tag_name(t)) return t;
  return std::nullopt;
}

inline size_t rule_arity(RuleTag t) {
  switch (t) {
    case RuleTag::Ax: case RuleTag::BotL: case RuleTag::OneR:
    case RuleTag::TopR: case RuleTag::Open:
      return 0;
    case RuleTag::Cut: case RuleTag::StarR: case RuleTag::AndR:
    case RuleTag::OrL: case RuleTag::WandL: case RuleTag::ImpL:
      return 2;
    default:
      return 1;
  }
}

inline bool tag_has_path(RuleTag t) {
  switch (t) {
    case RuleTag::W: case RuleTag::C: case RuleTag::Cut:
    case RuleTag::BotL: case RuleTag::OneL: case RuleTag::TopL:
    case RuleTag::StarL: case RuleTag::AndL: case RuleTag::OrL:
    case RuleTag::WandL: case RuleTag::ImpL:
      return true;
    default:
      return false;
  }
}

inline bool tag_has_param(RuleTag t) { return t == RuleTag::W || t == RuleTag::C; }

using Path = std::vector<size_t>;

class Proof {
  struct Node {
    RuleTag tag;
    std::optional<Path> path;
    std::optional<Bunch> param;
    Sequent seq;
    std::vector<Proof> prem;
  };
  std::shared_ptr<const Node> n_;
  explicit Proof(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

public:
  Proof() = default;

  static Proof make(RuleTag tag, Sequent seq, std::vector<Proof> prem = {},
                    std::optional<Path> path = {}, std::optional<Bunch> param = {}) {
    auto n = std::make_shared<Node>();
    n->tag = tag;
    n->path = std::move(path);
    n->param = std::move(param);
    n->seq = std::move(seq);
    n->prem = std::move(prem);
    return Proof(std::move(n));
  }

  bool valid() const { return n_ != nullptr; }
  RuleTag tag() const { return n_->tag; }
  const Sequent& conclusion() const { return n_->seq; }
  const std::vector<Proof>& premises() const { return n_->prem; }
  const std::optional<Path>& path() const { return n_->path; }
  const std::optional<Bunch>& param() const { return n_->param; }
  bool same_node(const Proof& o) const { return n_ == o.n_; }
};

inline bool operator==(const Proof& a, const Proof& b) {
  if (a.same_node(b)) return true;
  if (!a.valid() || !b.valid()) return a.valid() == b.valid();
  if (a.tag() != b.tag() || a.path() != b.path()) return false;
  if (a.param().has_value() != b.param().has_value()) return false;
  if (a.param() && !(*a.param() == *b.param())) return false;
  if (!(a.conclusion() == b.conclusion())) return false;
  if (a.premises().size() != b.premises().size()) return false;
  for (size_t i = 0; i < a.premises().size(); ++i)
    if (!(a.premises()[i] == b.premises()[i])) return false;
  return true;
}
inline bool operator!=(const Proof& a, const Proof& b) { return !(a == b); }

inline size_t proof_size(const Proof& p) {
  size_t n = 1;
  for (const auto& q : p.premises()) n += proof_size(q);
  return n;
}

inline size_t proof_depth(const Proof& p) {
  size_t m = 0;
  for (const auto& q : p.premises()) m = std::max(m, proof_depth(q));
  return m + 1;
}

inline void collect_open(const Proof& p, std::vector<Sequent>& out) {
  if (p.tag() == RuleTag::Open) out.push_back(p.conclusion());
  for (const auto& q : p.premises()) collect_open(q, out);
}

inline std::vector<Sequent> open_leaves(const Proof& p) {
  std::vector<Sequent> out;
  collect_open(p, out);
  return out;
}

inline std::string path_text(const Path& path) {
  std::string s = "@";
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

namespace detail {
inline void print_proof_rec(const Proof& p, std::string& out, size_t indent) {
  out.append(indent, ' ');
  out += '(';
  out += tag_name(p.tag());
  if (p.path()) { out += ' '; out += path_text(*p.path()); }
  if (p.param()) { out += " {"; out += to_text(*p.param()); out += '}'; }
  out += ' ';
  out += to_text(p.conclusion());
  for (const auto& q : p.premises()) {
    out += '\n';
    print_proof_rec(q, out, indent + 2);
  }
  out += ')';
}
}  // namespace detail

inline std::string print_proof(const Proof& p) {
  std::string out;
  detail::print_proof_rec(p, out, 0);
  out += '\n';
  return out;
}

namespace detail {
inline Proof parse_proof_node(Parser& p) {
  p.expect(Tok::LPar, "'('");
  if (!p.at(Tok::Atom)) p.fail("expected a rule tag");
  auto tag = tag_from_name(p.cur().text);
  if (!tag) p.fail("unknown rule tag '" + p.cur().text + "'");
  p.next();

  std::optional<Path> path;
  if (p.at(Tok::Path)) {
    if (!tag_has_path(*tag))
      p.fail(std::string("rule '") + tag_name(*tag) + "' takes no position");
    path = p.cur().path;
    p.next();
  } else if (tag_has_path(*tag)) {
    p.fail(std::string("rule '") + tag_name(*tag) + "' needs a position");
  }

  std::optional<Bunch> param;
  if (p.at(Tok::LBrace)) {
    if (!tag_has_param(*tag))
      p.fail(std::string("rule '") + tag_name(*tag) + "' takes no bunch argument");
    p.next();
    std::vector<Bunch> ch{p.bunch()};
    Tok sep = Tok::End;
    while (p.at(Tok::Comma) || p.at(Tok::Semi)) {
      if (sep == Tok::End) sep = p.cur().k;
      else if (p.cur().k != sep) p.fail("',' and ';' may not mix at one level");
      p.next();
      ch.push_back(p.bunch());
    }
    param = ch.size() == 1 ? ch[0]
          : sep == Tok::Comma ? Bunch::comma(std::move(ch)) : Bunch::semi(std::move(ch));
    p.expect(Tok::RBrace, "'}'");
  } else if (tag_has_param(*tag)) {
    p.fail(std::string("rule '") + tag_name(*tag) + "' needs a bunch argument in braces");
  }

  Sequent seq = p.sequent();
  std::vector<Proof> prem;
  while (p.at(Tok::LPar)) prem.push_back(parse_proof_node(p));
  p.expect(Tok::RPar, "')'");
  return Proof::make(*tag, std::move(seq), std::move(prem), std::move(path), std::move(param));
}
}  // namespace detail

inline Proof parse_proof(const std::string& s, Mode mode = Mode::Commutative) {
  Parser p(lex(s), mode);
  Proof pr = detail::parse_proof_node(p);
  p.expect_end();
  return pr;
}

}  // namespace biwb
