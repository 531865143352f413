#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "bracketlab/errors.hpp"
#include "bracketlab/symbolic/algebra.hpp"

namespace bracketlab::symbolic {

namespace detail {

// expr   := term (('+' | '-') term)*
// term   := unary (('*' unary) | ('/' unary))*
// unary  := ('-' | '+') unary | power
// power  := atom ('^' integer)?
// atom   := number | 'i' | 'hbar' | 'q' | 'p' | '(' expr ')'
// number := digits ('.' digits)?
//
// Products keep their written order; division is only by nonzero constants.
class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  NCPolynomial parse() {
    NCPolynomial out = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  NCPolynomial expr() {
    NCPolynomial out = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        out += term();
      } else if (accept('-')) {
        out -= term();
      } else {
        return out;
      }
    }
  }

  NCPolynomial term() {
    NCPolynomial out = unary();
    for (;;) {
      skip_space();
      if (accept('*')) {
        out = out * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        const NCPolynomial divisor = unary();
        const auto& terms = divisor.terms();
        if (terms.size() != 1 || !terms.begin()->first.word.empty() ||
            terms.begin()->first.hbar_power != 0) {
          pos_ = at;
          fail("division is only allowed by a nonzero numeric constant");
        }
        out *= ComplexRational(1) / terms.begin()->second;
      } else {
        return out;
      }
    }
  }

  NCPolynomial unary() {
    skip_space();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  NCPolynomial power() {
    NCPolynomial base = atom();
    skip_space();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a nonnegative integer exponent");
    const int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
    NCPolynomial out = NCPolynomial::one();
    for (int k = 0; k < n; ++k) out = out * base;
    return out;
  }

  NCPolynomial atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (accept('(')) {
      NCPolynomial inner = expr();
      skip_space();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "q") return NCPolynomial::q();
      if (name == "p") return NCPolynomial::p();
      if (name == "i") return NCPolynomial::constant(ComplexRational::i());
      if (name == "hbar") return NCPolynomial::hbar();
      pos_ = start;
      fail("unknown symbol '" + std::string(name) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NCPolynomial number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Rational value(std::string(text_.substr(start, pos_ - start)).c_str());
    if (accept('.')) {
      const std::size_t frac_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (frac_start == pos_) fail("expected digits after '.'");
      const std::string frac(text_.substr(frac_start, pos_ - frac_start));
      boost::multiprecision::cpp_int den = 1;
      for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
      value += Rational(boost::multiprecision::cpp_int(frac.c_str()), den);
    }
    return NCPolynomial::constant(ComplexRational(value));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse e.g. `3/2*i*hbar^2*q^2*p` or `q*p - p*q`; whitespace-insensitive.
inline NCPolynomial parse_nc(std::string_view text) { return detail::ExpressionParser(text).parse(); }

/// Parse and collapse to a commutative polynomial in (q, p).
inline CPolynomial parse_classical(std::string_view text) { return to_commutative(parse_nc(text)); }

}  // namespace bracketlab::symbolic
