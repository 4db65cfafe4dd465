#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "polynomial.hpp"

namespace polysmith {

// Recursive-descent parser for the polynomial text grammar:
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' integer)?
//   atom   := integer ('/' integer)? | identifier | '(' expr ')'
// No implicit multiplication. Locations are reported relative to the
// supplied origin so matrix files can point at the right line.
class PolyParser {
 public:
  PolyParser(std::string_view text, const VarSet& vs, std::size_t line = 1, std::size_t col0 = 1)
      : s_(text), vs_(vs), line_(line), col0_(col0) {}

  Polynomial parse() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    Polynomial p = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + token_text() + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col0_ + pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string token_text() const {
    if (pos_ >= s_.size()) return "end of input";
    std::size_t e = pos_;
    auto cls = [&](char c) {
      if (std::isdigit(static_cast<unsigned char>(c))) return 1;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return 2;
      return 0;
    };
    int k = cls(s_[pos_]);
    if (k == 0) return std::string(1, s_[pos_]);
    while (e < s_.size() && (cls(s_[e]) == k || (k == 2 && cls(s_[e]) == 1))) ++e;
    return std::string(s_.substr(pos_, e - pos_));
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  Polynomial expr() {
    Polynomial acc = term();
    while (true) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (eat('*')) acc *= unary();
    return acc;
  }

  Polynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (!eat('^')) return base;
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail("exponent must be a nonnegative integer literal, found '" + token_text() + "'");
    std::string d = digits();
    if (d.size() > 5 || std::stoul(d) > 0xFFFF) fail("exponent " + d + " too large");
    return pow(base, unsigned(std::stoul(d)));
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num(digits());
      std::size_t save = pos_;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
          fail("expected integer denominator, found '" + token_text() + "'");
        std::size_t at = pos_;
        mpz_class den(digits());
        if (den == 0) {
          pos_ = at;
          fail("zero denominator");
        }
        Coefficient q(num, den);
        q.canonicalize();
        return Polynomial(vs_, q);
      }
      pos_ = save;
      return Polynomial(vs_, Coefficient(num));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(b, pos_ - b));
      auto idx = vs_.index_of(name);
      if (!idx) {
        pos_ = b;
        fail("unknown variable '" + name + "'");
      }
      return Polynomial::variable(vs_, *idx);
    }
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')', found '" + token_text() + "'");
      return p;
    }
    fail("unexpected '" + token_text() + "'");
  }

  std::string_view s_;
  const VarSet& vs_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

inline Polynomial parse_polynomial(std::string_view text, const VarSet& vs) { return PolyParser(text, vs).parse(); }

}  // namespace polysmith
