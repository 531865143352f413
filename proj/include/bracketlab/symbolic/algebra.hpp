#pragma once

#include <string>
#include <vector>

#include "bracketlab/errors.hpp"
#include "bracketlab/symbolic/polynomial.hpp"

namespace bracketlab::symbolic {

/// Which `pq` occurrence the rewriter expands first. Both reach the same
/// normal form; the choice exists so confluence can be tested.
enum class RewriteStrategy { leftmost, rightmost };

/// Rewrite every word to q^a p^b using pq -> qp - i*hbar.
inline NCPolynomial normal_order(const NCPolynomial& poly,
                                 RewriteStrategy strategy = RewriteStrategy::leftmost) {
  NCPolynomial pending = poly;
  NCPolynomial done;
  const ComplexRational minus_i(0, -1);
  while (!pending.is_zero()) {
    const auto first = pending.terms().begin();
    const NCKey key = first->first;
    const ComplexRational coeff = first->second;
    pending.add_term(key.word, key.hbar_power, -coeff);

    const std::size_t at = strategy == RewriteStrategy::leftmost ? key.word.find("pq")
                                                                 : key.word.rfind("pq");
    if (at == std::string::npos) {
      done.add_term(key.word, key.hbar_power, coeff);
      continue;
    }
    const std::string left = key.word.substr(0, at);
    const std::string right = key.word.substr(at + 2);
    pending.add_term(left + "qp" + right, key.hbar_power, coeff);
    pending.add_term(left + right, key.hbar_power + 1, coeff * minus_i);
  }
  return done;
}

/// normal_order(a*b - b*a)
inline NCPolynomial nc_commutator(const NCPolynomial& a, const NCPolynomial& b) {
  return normal_order(a * b - b * a);
}

inline NCPolynomial nc_anticommutator(const NCPolynomial& a, const NCPolynomial& b) {
  return normal_order(a * b + b * a);
}

/// Termwise derivative of a normal-ordered polynomial:
/// d(q^a p^b)/dq = a q^(a-1) p^b, d(q^a p^b)/dp = b q^a p^(b-1).
inline NCPolynomial formal_derivative(const NCPolynomial& poly, Symbol var) {
  if (!poly.is_normal_ordered()) {
    throw InvalidArgument("formal_derivative requires a normal-ordered polynomial");
  }
  NCPolynomial out;
  for (const auto& [k, c] : poly.terms()) {
    const auto a = static_cast<int>(k.word.find('p') == std::string::npos ? k.word.size()
                                                                          : k.word.find('p'));
    const int b = static_cast<int>(k.word.size()) - a;
    if (var == Symbol::q && a > 0) {
      out.add_term(std::string(a - 1, 'q') + std::string(b, 'p'), k.hbar_power,
                   c * ComplexRational(a));
    } else if (var == Symbol::p && b > 0) {
      out.add_term(std::string(a, 'q') + std::string(b - 1, 'p'), k.hbar_power,
                   c * ComplexRational(b));
    }
  }
  return out;
}

/// {f, g} = df/dq dg/dp - df/dp dg/dq
inline CPolynomial classical_poisson(const CPolynomial& f, const CPolynomial& g) {
  return f.derivative(0) * g.derivative(1) - f.derivative(1) * g.derivative(0);
}

namespace detail {

/// All distinct arrangements of a copies of q and b copies of p.
inline std::vector<std::string> interleavings(int a, int b) {
  std::string w = std::string(a, 'q') + std::string(b, 'p');
  // sorted ascending ('p' < 'q') so next_permutation enumerates each word once
  std::sort(w.begin(), w.end());
  std::vector<std::string> out;
  do {
    out.push_back(w);
  } while (std::next_permutation(w.begin(), w.end()));
  return out;
}

}  // namespace detail

/// Weyl (fully symmetric) ordering: each q^a p^b becomes the average of its
/// C(a+b, a) distinct interleavings.
inline NCPolynomial weyl_quantize(const CPolynomial& f) {
  NCPolynomial out;
  for (const auto& [k, c] : f.terms()) {
    const auto words = detail::interleavings(k.a, k.b);
    const ComplexRational share = c / ComplexRational(static_cast<long long>(words.size()));
    for (const auto& w : words) out.add_term(w, k.hbar_power, share);
  }
  return out;
}

/// normal_order([W(f), W(g)] - i*hbar*W({f, g})); zero when the Weyl map
/// intertwines the two brackets for this pair.
inline NCPolynomial dirac_discrepancy(const CPolynomial& f, const CPolynomial& g) {
  const NCPolynomial lhs = nc_commutator(weyl_quantize(f), weyl_quantize(g));
  const NCPolynomial rhs = ComplexRational::i() * NCPolynomial::hbar() *
                           weyl_quantize(classical_poisson(f, g));
  return normal_order(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Canonical maps

/// (q, p) as polynomials in new variables (u, v); in each CPolynomial the
/// first exponent belongs to u and the second to v.
struct CanonicalMap {
  CPolynomial q_expr;
  CPolynomial p_expr;
  std::string label;

  /// dq/du dp/dv - dq/dv dp/du
  CPolynomial jacobian() const {
    return q_expr.derivative(0) * p_expr.derivative(1) - q_expr.derivative(1) * p_expr.derivative(0);
  }

  bool is_canonical() const { return jacobian() == CPolynomial::constant(1); }

  /// Linear map q = m11 u + m12 v, p = m21 u + m22 v.
  static CanonicalMap linear(const Rational& m11, const Rational& m12, const Rational& m21,
                             const Rational& m22, std::string label = "linear") {
    CanonicalMap m;
    m.q_expr = CPolynomial::monomial(1, 0, ComplexRational(m11)) +
               CPolynomial::monomial(0, 1, ComplexRational(m12));
    m.p_expr = CPolynomial::monomial(1, 0, ComplexRational(m21)) +
               CPolynomial::monomial(0, 1, ComplexRational(m22));
    m.label = std::move(label);
    return m;
  }
};

enum class MapVar { u = 0, v = 1 };

/// Lagrange bracket (w1, w2) = dq/dw1 dp/dw2 - dp/dw1 dq/dw2.
inline CPolynomial lagrange_bracket(const CanonicalMap& map, MapVar w1, MapVar w2) {
  const int i = static_cast<int>(w1);
  const int j = static_cast<int>(w2);
  return map.q_expr.derivative(i) * map.p_expr.derivative(j) -
         map.p_expr.derivative(i) * map.q_expr.derivative(j);
}

}  // namespace bracketlab::symbolic
