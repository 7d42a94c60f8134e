#pragma once
// Recursive-descent parsing for formulas, bunches and sequents.
//
//   formula  := imp
//   imp      := or ("->" or)?                 chaining needs parentheses
//   or       := and ("|" and)*                left-associative
//   and      := mult ("&" mult)*              left-associative
//   mult     := unary (("*"|"-*"|"\"|"/") unary)?   chaining needs parentheses
//   unary    := "~" unary | atom | "top" | "bot" | "unit" | "(" formula ")"
//   bunch    := formula | "e*" | "e+"
//             | "(" bunch ("," bunch)+ ")" | "(" bunch (";" bunch)+ ")"
//   sequent  := bunchlist "=>" formula
//
// bunchlist allows an unparenthesized run of one separator at the top level
// of a sequent as input sugar; printing always emits the strict grammar.
// "e" immediately followed by '*' or '+' lexes as a unit token, so the atom
// e must be separated from a following operator by whitespace.

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bunch.hpp"
#include "formula.hpp"

namespace biwb {

struct ParseError : std::runtime_error {
  size_t line, col;
  ParseError(size_t line_, size_t col_, const std::string& msg)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

enum class Tok {
  Atom, Top, Bot, One, MultUnit, AddUnit,
  Tilde, Amp, Bar, Arrow, StarOp, WandOp, LdivOp, RdivOp,
  LPar, RPar, Comma, Semi, SeqArrow,
  LBrace, RBrace, Path,   // proof certificate extras
  End
};

struct Token {
  Tok k;
  std::string text;              // Atom payload
  std::vector<size_t> path;      // Path payload
  size_t line = 1, col = 1;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0, line = 1, col = 1;
  auto peek = [&](size_t off = 0) -> char { return i + off < src.size() ? src[i + off] : '\0'; };
  auto advance = [&]() {
    if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
    ++i;
  };
  auto push = [&](Tok k, size_t l, size_t c) { out.push_back({k, {}, {}, l, c}); };
  while (i < src.size()) {
    char ch = peek();
    size_t l = line, c = col;
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') { advance(); continue; }
    if (ch == '#') {
      while (i < src.size() && peek() != '\n') advance();
      continue;
    }
    if (ch >= 'a' && ch <= 'z') {
      std::string id;
      while (i < src.size() && (std::islower(static_cast<unsigned char>(peek())) ||
                                std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) {
        id += peek();
        advance();
      }
      if (id == "e" && (peek() == '*' || peek() == '+')) {
        push(peek() == '*' ? Tok::MultUnit : Tok::AddUnit, l, c);
        advance();
      } else if (id == "top") push(Tok::Top, l, c);
      else if (id == "bot") push(Tok::Bot, l, c);
      else if (id == "unit") push(Tok::One, l, c);
      else { out.push_back({Tok::Atom, id, {}, l, c}); }
      continue;
    }
    switch (ch) {
      case '~': push(Tok::Tilde, l, c); advance(); break;
      case '&': push(Tok::Amp, l, c); advance(); break;
      case '|': push(Tok::Bar, l, c); advance(); break;
      case '*': push(Tok::StarOp, l, c); advance(); break;
      case '\\': push(Tok::LdivOp, l, c); advance(); break;
      case '/': push(Tok::RdivOp, l, c); advance(); break;
      case '(': push(Tok::LPar, l, c); advance(); break;
      case ')': push(Tok::RPar, l, c); advance(); break;
      case ',': push(Tok::Comma, l, c); advance(); break;
      case ';': push(Tok::Semi, l, c); advance(); break;
      case '{': push(Tok::LBrace, l, c); advance(); break;
      case '}': push(Tok::RBrace, l, c); advance(); break;
      case '-':
        advance();
        if (peek() == '>') { push(Tok::Arrow, l, c); advance(); }
        else if (peek() == '*') { push(Tok::WandOp, l, c); advance(); }
        else throw ParseError(l, c, "expected '->' or '-*'");
        break;
      case '=':
        advance();
        if (peek() == '>') { push(Tok::SeqArrow, l, c); advance(); }
        else throw ParseError(l, c, "expected '=>'");
        break;
      case '@': {
        advance();
        Token t{Tok::Path, {}, {}, l, c};
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          size_t v = 0;
          while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + size_t(peek() - '0');
            advance();
          }
          t.path.push_back(v);
          if (peek() == '.') advance(); else break;
        }
        out.push_back(std::move(t));
        break;
      }
      default:
        throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
    }
  }
  out.push_back({Tok::End, {}, {}, line, col});
  return out;
}

class Parser {
public:
  Parser(std::vector<Token> toks, Mode mode) : toks_(std::move(toks)), mode_(mode) {}

  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(size_t off) const {
    return toks_[std::min(pos_ + off, toks_.size() - 1)];
  }
  void next() { if (cur().k != Tok::End) ++pos_; }
  bool at(Tok k) const { return cur().k == k; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(cur().line, cur().col, msg);
  }
  void expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    next();
  }
  void expect_end() {
    if (!at(Tok::End)) fail("trailing input");
  }

  Formula formula() {
    Formula a = disjunction();
    if (at(Tok::Arrow)) {
      next();
      Formula b = disjunction();
      if (at(Tok::Arrow)) fail("'->' does not chain; parenthesize");
      return Formula::imp(a, b);
    }
    return a;
  }

  Bunch bunch() {
    if (at(Tok::MultUnit)) { next(); return Bunch::mult_unit(); }
    if (at(Tok::AddUnit)) { next(); return Bunch::add_unit(); }
    if (at(Tok::LPar) && group_ahead()) {
      next();
      std::vector<Bunch> ch{bunch()};
      if (!at(Tok::Comma) && !at(Tok::Semi)) fail("expected ',' or ';' in bunch group");
      Tok sep = cur().k;
      while (at(Tok::Comma) || at(Tok::Semi)) {
        if (cur().k != sep) fail("',' and ';' may not mix in one group");
        next();
        ch.push_back(bunch());
      }
      expect(Tok::RPar, "')'");
      return sep == Tok::Comma ? Bunch::comma(std::move(ch)) : Bunch::semi(std::move(ch));
    }
    return Bunch::leaf(formula());
  }

  // Sequent with optional unparenthesized top-level separator run.
  Sequent sequent() {
    std::vector<Bunch> ch{bunch()};
    Tok sep = Tok::End;
    while (at(Tok::Comma) || at(Tok::Semi)) {
      if (sep == Tok::End) sep = cur().k;
      else if (cur().k != sep) fail("',' and ';' may not mix at one level");
      next();
      ch.push_back(bunch());
    }
    Bunch a = ch.size() == 1 ? ch[0]
            : sep == Tok::Comma ? Bunch::comma(std::move(ch)) : Bunch::semi(std::move(ch));
    expect(Tok::SeqArrow, "'=>'");
    Formula f = formula();
    return {std::move(a), std::move(f)};
  }

private:
  std::vector<Token> toks_;
  Mode mode_;
  size_t pos_ = 0;

  // True when the parenthesized group at cur() contains ',' or ';' at depth
  // one, i.e. it is a bunch group rather than a parenthesized formula.
  bool group_ahead() const {
    size_t depth = 0;
    for (size_t off = 0;; ++off) {
      const Token& t = ahead(off);
      if (t.k == Tok::End) return false;
      if (t.k == Tok::LPar) ++depth;
      else if (t.k == Tok::RPar) { if (--depth == 0) return false; }
      else if (depth == 1 && (t.k == Tok::Comma || t.k == Tok::Semi)) return true;
    }
  }

  Formula disjunction() {
    Formula a = conjunction();
    while (at(Tok::Bar)) {
      next();
      a = Formula::disj(a, conjunction());
    }
    return a;
  }

  Formula conjunction() {
    Formula a = mult();
    while (at(Tok::Amp)) {
      next();
      a = Formula::conj(a, mult());
    }
    return a;
  }

  Formula mult() {
    Formula a = unary();
    if (at(Tok::StarOp) || at(Tok::WandOp) || at(Tok::LdivOp) || at(Tok::RdivOp)) {
      Tok op = cur().k;
      if (op == Tok::WandOp && mode_ == Mode::NonCommutative)
        fail("'-*' is not available in non-commutative mode; use '\\' or '/'");
      next();
      Formula b = unary();
      if (at(Tok::StarOp) || at(Tok::WandOp) || at(Tok::LdivOp) || at(Tok::RdivOp))
        fail("multiplicative operators do not chain; parenthesize");
      switch (op) {
        case Tok::StarOp: return Formula::star(a, b);
        case Tok::WandOp: return Formula::wand(a, b);
        case Tok::LdivOp: return Formula::ldiv(a, b);
        default: return Formula::rdiv(a, b);
      }
    }
    return a;
  }

  Formula unary() {
    switch (cur().k) {
      case Tok::Tilde: next(); return Formula::neg(unary());
      case Tok::Atom: { Formula f = Formula::atom(cur().text); next(); return f; }
      case Tok::Top: next(); return Formula::top();
      case Tok::Bot: next(); return Formula::bot();
      case Tok::One: next(); return Formula::one();
      case Tok::LPar: {
        next();
        Formula f = formula();
        expect(Tok::RPar, "')'");
        return f;
      }
      case Tok::MultUnit:
      case Tok::AddUnit:
        fail("bunch unit in formula position");
      default:
        fail("expected a formula");
    }
  }
};

inline Formula parse_formula(const std::string& s, Mode mode = Mode::Commutative) {
  Parser p(lex(s), mode);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

inline Bunch parse_bunch(const std::string& s, Mode mode = Mode::Commutative) {
  Parser p(lex(s), mode);
  Bunch b = p.bunch();
  p.expect_end();
  return b;
}

inline Sequent parse_sequent(const std::string& s, Mode mode = Mode::Commutative) {
  Parser p(lex(s), mode);
  Sequent q = p.sequent();
  p.expect_end();
  return q;
}

}  // namespace biwb
