#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <utility>

#include "bracketlab/errors.hpp"
#include "bracketlab/symbolic/coefficient.hpp"

namespace bracketlab::symbolic {

enum class Symbol : char { q = 'q', p = 'p' };

/// A word over {q, p} together with a power of the formal hbar.
struct NCKey {
  std::string word;
  int hbar_power = 0;

  friend bool operator==(const NCKey&, const NCKey&) = default;
};

/// Higher degree first, then lexicographic word, then hbar power.
struct NCKeyOrder {
  bool operator()(const NCKey& a, const NCKey& b) const {
    if (a.word.size() != b.word.size()) return a.word.size() > b.word.size();
    if (a.word != b.word) return a.word > b.word;
    return a.hbar_power < b.hbar_power;
  }
};

namespace detail {

inline bool valid_word(const std::string& w) {
  return std::all_of(w.begin(), w.end(), [](char c) { return c == 'q' || c == 'p'; });
}

inline std::string power_text(const std::string& base, int n) {
  return n == 1 ? base : base + "^" + std::to_string(n);
}

/// `coefficient*hbar^k*factors` with the sign pulled out; returns (negative, text).
inline std::pair<bool, std::string> term_text(const ComplexRational& c, int hbar_power,
                                              const std::string& factors) {
  bool negative = false;
  ComplexRational mag = c;
  if ((c.imag() == 0 && c.real() < 0) || (c.real() == 0 && c.imag() < 0)) {
    negative = true;
    mag = -c;
  }
  std::string out;
  auto append = [&out](const std::string& s) {
    if (!out.empty()) out += "*";
    out += s;
  };
  const bool unit = mag == ComplexRational(1);
  if (!unit) append(mag.to_string());
  if (hbar_power > 0) append(power_text("hbar", hbar_power));
  if (!factors.empty()) append(factors);
  if (out.empty()) out = "1";
  return {negative, out};
}

template <typename Map, typename Render>
std::string render_sum(const Map& terms, Render render) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, coeff] : terms) {
    auto [negative, text] = render(key, coeff);
    if (first) {
      out += negative ? "-" + text : text;
      first = false;
    } else {
      out += negative ? " - " : " + ";
      out += text;
    }
  }
  return out;
}

}  // namespace detail

/// Noncommutative polynomial in q, p with exact complex rational coefficients
/// and formal hbar powers. Zero coefficients are never stored.
class NCPolynomial {
 public:
  using Terms = std::map<NCKey, ComplexRational, NCKeyOrder>;

  NCPolynomial() = default;

  static NCPolynomial constant(const ComplexRational& c, int hbar_power = 0) {
    NCPolynomial out;
    out.add_term("", hbar_power, c);
    return out;
  }
  static NCPolynomial one() { return constant(1); }
  static NCPolynomial hbar() { return constant(1, 1); }
  static NCPolynomial symbol(Symbol s) { return word(std::string(1, static_cast<char>(s))); }
  static NCPolynomial q() { return symbol(Symbol::q); }
  static NCPolynomial p() { return symbol(Symbol::p); }
  static NCPolynomial word(const std::string& w, const ComplexRational& c = 1, int hbar_power = 0) {
    NCPolynomial out;
    out.add_term(w, hbar_power, c);
    return out;
  }
  /// q^a p^b
  static NCPolynomial monomial(int a, int b, const ComplexRational& c = 1, int hbar_power = 0) {
    return word(std::string(a, 'q') + std::string(b, 'p'), c, hbar_power);
  }

  void add_term(const std::string& w, int hbar_power, const ComplexRational& c) {
    if (hbar_power < 0) throw InvalidArgument("negative hbar power");
    if (!detail::valid_word(w)) throw InvalidArgument("word must use only q and p: " + w);
    if (c.is_zero()) return;
    NCKey key{w, hbar_power};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Coefficient of an exact (word, hbar power) key; zero when absent.
  ComplexRational coefficient(const std::string& w, int hbar_power = 0) const {
    auto it = terms_.find(NCKey{w, hbar_power});
    return it == terms_.end() ? ComplexRational{} : it->second;
  }

  /// Largest word length.
  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, static_cast<int>(k.word.size()));
    return d;
  }

  /// Every word has the shape q^a p^b.
  bool is_normal_ordered() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.word.find("pq") == std::string::npos; });
  }

  NCPolynomial& operator+=(const NCPolynomial& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.word, k.hbar_power, c);
    return *this;
  }
  NCPolynomial& operator-=(const NCPolynomial& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.word, k.hbar_power, -c);
    return *this;
  }
  NCPolynomial& operator*=(const ComplexRational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend NCPolynomial operator+(NCPolynomial a, const NCPolynomial& b) { return a += b; }
  friend NCPolynomial operator-(NCPolynomial a, const NCPolynomial& b) { return a -= b; }
  friend NCPolynomial operator-(NCPolynomial a) { return a *= ComplexRational(-1); }
  friend NCPolynomial operator*(const ComplexRational& s, NCPolynomial a) { return a *= s; }
  friend NCPolynomial operator*(NCPolynomial a, const ComplexRational& s) { return a *= s; }

  /// Concatenation product (no reordering).
  friend NCPolynomial operator*(const NCPolynomial& a, const NCPolynomial& b) {
    NCPolynomial out;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        out.add_term(ka.word + kb.word, ka.hbar_power + kb.hbar_power, ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const NCPolynomial& a, const NCPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  /// Expression text in the parser grammar, e.g. `9*i*hbar*q^2*p^2 - 6*i*hbar^3`.
  std::string to_string() const {
    return detail::render_sum(terms_, [](const NCKey& k, const ComplexRational& c) {
      return detail::term_text(c, k.hbar_power, word_text(k.word));
    });
  }

  static std::string word_text(const std::string& w) {
    std::string out;
    std::size_t i = 0;
    while (i < w.size()) {
      std::size_t j = i;
      while (j < w.size() && w[j] == w[i]) ++j;
      if (!out.empty()) out += "*";
      out += detail::power_text(std::string(1, w[i]), static_cast<int>(j - i));
      i = j;
    }
    return out;
  }

 private:
  Terms terms_;
};

/// Exponents (a, b) of x^a y^b together with a formal hbar power. For phase-space
/// polynomials x = q and y = p; for canonical maps x = u and y = v.
struct CKey {
  int a = 0;
  int b = 0;
  int hbar_power = 0;

  friend auto operator<=>(const CKey&, const CKey&) = default;
};

struct CKeyOrder {
  bool operator()(const CKey& l, const CKey& r) const {
    if (l.a + l.b != r.a + r.b) return l.a + l.b > r.a + r.b;
    if (l.a != r.a) return l.a > r.a;
    return l.hbar_power < r.hbar_power;
  }
};

/// Commutative polynomial in two variables with exact coefficients.
class CPolynomial {
 public:
  using Terms = std::map<CKey, ComplexRational, CKeyOrder>;

  CPolynomial() = default;

  static CPolynomial constant(const ComplexRational& c, int hbar_power = 0) {
    return monomial(0, 0, c, hbar_power);
  }
  static CPolynomial monomial(int a, int b, const ComplexRational& c = 1, int hbar_power = 0) {
    CPolynomial out;
    out.add_term(a, b, hbar_power, c);
    return out;
  }
  static CPolynomial x() { return monomial(1, 0); }
  static CPolynomial y() { return monomial(0, 1); }

  void add_term(int a, int b, int hbar_power, const ComplexRational& c) {
    if (a < 0 || b < 0 || hbar_power < 0) throw InvalidArgument("negative exponent");
    if (c.is_zero()) return;
    CKey key{a, b, hbar_power};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  ComplexRational coefficient(int a, int b, int hbar_power = 0) const {
    auto it = terms_.find(CKey{a, b, hbar_power});
    return it == terms_.end() ? ComplexRational{} : it->second;
  }

  /// Largest total degree a + b.
  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.a + k.b);
    return d;
  }

  /// Partial derivative in the first (var = 0) or second (var = 1) variable.
  CPolynomial derivative(int var) const {
    if (var != 0 && var != 1) throw InvalidArgument("derivative variable must be 0 or 1");
    CPolynomial out;
    for (const auto& [k, c] : terms_) {
      const int e = var == 0 ? k.a : k.b;
      if (e == 0) continue;
      out.add_term(var == 0 ? k.a - 1 : k.a, var == 1 ? k.b - 1 : k.b, k.hbar_power,
                   c * ComplexRational(e));
    }
    return out;
  }

  CPolynomial& operator+=(const CPolynomial& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.a, k.b, k.hbar_power, c);
    return *this;
  }
  CPolynomial& operator-=(const CPolynomial& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.a, k.b, k.hbar_power, -c);
    return *this;
  }
  CPolynomial& operator*=(const ComplexRational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend CPolynomial operator+(CPolynomial a, const CPolynomial& b) { return a += b; }
  friend CPolynomial operator-(CPolynomial a, const CPolynomial& b) { return a -= b; }
  friend CPolynomial operator-(CPolynomial a) { return a *= ComplexRational(-1); }
  friend CPolynomial operator*(const ComplexRational& s, CPolynomial a) { return a *= s; }
  friend CPolynomial operator*(CPolynomial a, const ComplexRational& s) { return a *= s; }
  friend CPolynomial operator*(const CPolynomial& l, const CPolynomial& r) {
    CPolynomial out;
    for (const auto& [kl, cl] : l.terms_) {
      for (const auto& [kr, cr] : r.terms_) {
        out.add_term(kl.a + kr.a, kl.b + kr.b, kl.hbar_power + kr.hbar_power, cl * cr);
      }
    }
    return out;
  }

  friend bool operator==(const CPolynomial& l, const CPolynomial& r) { return l.terms_ == r.terms_; }

  /// Render with variable names (default q, p).
  std::string to_string(const std::string& x_name = "q", const std::string& y_name = "p") const {
    return detail::render_sum(terms_, [&](const CKey& k, const ComplexRational& c) {
      std::string factors;
      if (k.a > 0) factors = detail::power_text(x_name, k.a);
      if (k.b > 0) factors += (factors.empty() ? "" : "*") + detail::power_text(y_name, k.b);
      return detail::term_text(c, k.hbar_power, factors);
    });
  }

 private:
  Terms terms_;
};

/// Collapse a word polynomial to its commutative image (q and p commute).
inline CPolynomial to_commutative(const NCPolynomial& poly) {
  CPolynomial out;
  for (const auto& [k, c] : poly.terms()) {
    const auto nq = static_cast<int>(std::count(k.word.begin(), k.word.end(), 'q'));
    out.add_term(nq, static_cast<int>(k.word.size()) - nq, k.hbar_power, c);
  }
  return out;
}

}  // namespace bracketlab::symbolic
