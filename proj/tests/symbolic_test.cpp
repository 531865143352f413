#include <map>
#include <tuple>

#include <gtest/gtest.h>

#include "bracketlab/reps.hpp"
#include "bracketlab/symbolic/algebra.hpp"
#include "bracketlab/symbolic/parser.hpp"
#include "test_support.hpp"

using namespace bracketlab;
using namespace bracketlab::symbolic;

namespace {

const ComplexRational kIc = ComplexRational::i();

NCPolynomial q() { return NCPolynomial::q(); }
NCPolynomial p() { return NCPolynomial::p(); }
NCPolynomial hb(int k = 1) { return NCPolynomial::constant(1, k); }

/// Independent normal-ordering oracle: fold the word from the left while
/// keeping a normal-ordered accumulator, using (q^a p^b) q = q^{a+1} p^b - i hbar b q^a p^{b-1}.
/// No pq-rewriting is involved.
NCPolynomial oracle_normal_order(const NCPolynomial& poly) {
  using Key = std::tuple<int, int, int>;  // a, b, hbar power
  std::map<Key, ComplexRational> acc;
  for (const auto& [key, coeff] : poly.terms()) {
    std::map<Key, ComplexRational> cur{{Key{0, 0, key.hbar_power}, coeff}};
    for (char s : key.word) {
      std::map<Key, ComplexRational> next;
      for (const auto& [k, c] : cur) {
        auto [a, b, h] = k;
        if (s == 'p') {
          next[Key{a, b + 1, h}] += c;
        } else {
          next[Key{a + 1, b, h}] += c;
          if (b > 0) next[Key{a, b - 1, h + 1}] += c * ComplexRational(0, -b);
        }
      }
      cur = std::move(next);
    }
    for (const auto& [k, c] : cur) acc[k] += c;
  }
  NCPolynomial out;
  for (const auto& [k, c] : acc) {
    auto [a, b, h] = k;
    out.add_term(std::string(a, 'q') + std::string(b, 'p'), h, c);
  }
  return out;
}

NCPolynomial random_nc(SplitMix64& rng, int max_len, int max_terms = 3) {
  NCPolynomial out;
  const int terms = 1 + static_cast<int>(rng.next() % max_terms);
  for (int t = 0; t < terms; ++t) {
    const int len = static_cast<int>(rng.next() % (max_len + 1));
    std::string w;
    for (int k = 0; k < len; ++k) w += (rng.next() & 1) ? 'q' : 'p';
    const auto re = static_cast<long long>(rng.next() % 7) - 3;
    const auto im = static_cast<long long>(rng.next() % 5) - 2;
    out.add_term(w, static_cast<int>(rng.next() % 2), ComplexRational(re, im));
  }
  return out;
}

CPolynomial random_classical(SplitMix64& rng, int max_deg) {
  CPolynomial out;
  const int terms = 1 + static_cast<int>(rng.next() % 3);
  for (int t = 0; t < terms; ++t) {
    const int a = static_cast<int>(rng.next() % (max_deg + 1));
    const int b = static_cast<int>(rng.next() % (max_deg + 1 - a));
    out.add_term(a, b, 0, ComplexRational(Rational(static_cast<long long>(rng.next() % 9) - 4, 2)));
  }
  return out;
}

}  // namespace

// --- normal ordering --------------------------------------------------------

TEST(NormalOrderTest, Examples) {
  EXPECT_EQ(normal_order(q() * p()), q() * p());
  EXPECT_EQ(normal_order(p() * q()), q() * p() - kIc * hb());
  EXPECT_EQ(normal_order(p() * q() * p()), q() * p() * p() - kIc * hb() * p());
}

TEST(NormalOrderTest, AgreesWithOracle) {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const NCPolynomial poly = random_nc(rng, 8);
    const NCPolynomial ordered = normal_order(poly);
    EXPECT_TRUE(ordered.is_normal_ordered());
    EXPECT_EQ(ordered, oracle_normal_order(poly)) << poly.to_string();
  }
}

TEST(NormalOrderTest, ConfluentAndIdempotent) {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    NCPolynomial product = NCPolynomial::one();
    const int factors = 1 + static_cast<int>(rng.next() % 8);
    for (int k = 0; k < factors; ++k) product = product * ((rng.next() & 1) ? q() : p());
    const NCPolynomial left = normal_order(product, RewriteStrategy::leftmost);
    const NCPolynomial right = normal_order(product, RewriteStrategy::rightmost);
    EXPECT_EQ(left, right) << product.to_string();
    EXPECT_EQ(normal_order(left), left);
  }
}

// --- commutators ------------------------------------------------------------

TEST(NcCommutatorTest, Examples) {
  EXPECT_TRUE(nc_commutator(q(), q()).is_zero());
  EXPECT_EQ(nc_commutator(q(), p()), kIc * hb());
}

TEST(NcCommutatorTest, CubicPairFrozen) {
  // brute force via oracle_normal_order and the closed form
  // [q^m, p^n] = -sum_{k>=1} (-i hbar)^k k! C(m,k) C(n,k) q^{m-k} p^{n-k}
  const NCPolynomial q3 = q() * q() * q();
  const NCPolynomial p3 = p() * p() * p();
  const NCPolynomial expected = NCPolynomial::monomial(2, 2, ComplexRational(0, 9), 1) +
                                NCPolynomial::monomial(1, 1, 18, 2) +
                                NCPolynomial::monomial(0, 0, ComplexRational(0, -6), 3);
  EXPECT_EQ(oracle_normal_order(q3 * p3 - p3 * q3), expected);
  EXPECT_EQ(nc_commutator(q3, p3), expected);
}

TEST(NcCommutatorTest, ClosedFormPowers) {
  auto binom = [](int n, int k) {
    long long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
  };
  for (int m = 0; m <= 4; ++m) {
    for (int n = 0; n <= 4; ++n) {
      NCPolynomial expected;
      ComplexRational minus_i_pow = 1;
      long long fact = 1;
      for (int k = 1; k <= std::min(m, n); ++k) {
        minus_i_pow *= ComplexRational(0, -1);
        fact *= k;
        expected.add_term(std::string(m - k, 'q') + std::string(n - k, 'p'), k,
                          -(minus_i_pow * ComplexRational(fact * binom(m, k) * binom(n, k))));
      }
      EXPECT_EQ(nc_commutator(NCPolynomial::monomial(m, 0), NCPolynomial::monomial(0, n)), expected)
          << "m=" << m << " n=" << n;
    }
  }
}

TEST(NcCommutatorTest, DerivativeDuality) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const NCPolynomial w = normal_order(random_nc(rng, 5));
    EXPECT_EQ(nc_commutator(q(), w), kIc * hb() * formal_derivative(w, Symbol::p));
    EXPECT_EQ(nc_commutator(p(), w), -(kIc * hb() * formal_derivative(w, Symbol::q)));
  }
}

TEST(NcCommutatorTest, JacobiIdentity) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const NCPolynomial a = random_nc(rng, 3);
    const NCPolynomial b = random_nc(rng, 3);
    const NCPolynomial c = random_nc(rng, 3);
    const NCPolynomial sum = nc_commutator(a, nc_commutator(b, c)) +
                             nc_commutator(c, nc_commutator(a, b)) +
                             nc_commutator(b, nc_commutator(c, a));
    EXPECT_TRUE(normal_order(sum).is_zero());
  }
}

TEST(NcCommutatorTest, LeibnizRule) {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const NCPolynomial a = random_nc(rng, 3);
    const NCPolynomial b = random_nc(rng, 3);
    const NCPolynomial c = random_nc(rng, 3);
    const NCPolynomial lhs = nc_commutator(a * b, c);
    const NCPolynomial rhs = normal_order(a * nc_commutator(b, c) + nc_commutator(a, c) * b);
    EXPECT_EQ(lhs, rhs);
  }
}

// --- derivatives ------------------------------------------------------------

TEST(FormalDerivativeTest, Examples) {
  EXPECT_EQ(formal_derivative(NCPolynomial::monomial(2, 3), Symbol::p), NCPolynomial::monomial(2, 2, 3));
  EXPECT_TRUE(formal_derivative(NCPolynomial::monomial(2, 0), Symbol::p).is_zero());
  const NCPolynomial ccr = normal_order(q() * p() - p() * q());
  EXPECT_EQ(ccr, kIc * hb());
  EXPECT_TRUE(formal_derivative(ccr, Symbol::q).is_zero());
  EXPECT_TRUE(formal_derivative(ccr, Symbol::p).is_zero());
}

TEST(FormalDerivativeTest, RejectsUnorderedInput) {
  EXPECT_THROW(formal_derivative(p() * q(), Symbol::q), InvalidArgument);
}

// --- classical brackets -----------------------------------------------------

TEST(ClassicalPoissonTest, Examples) {
  EXPECT_EQ(classical_poisson(CPolynomial::x(), CPolynomial::y()), CPolynomial::constant(1));
  SplitMix64 rng(5);
  const CPolynomial f = random_classical(rng, 4);
  EXPECT_TRUE(classical_poisson(f, f).is_zero());
  EXPECT_EQ(classical_poisson(CPolynomial::monomial(3, 0), CPolynomial::monomial(0, 3)),
            CPolynomial::monomial(2, 2, 9));
}

// --- Weyl ordering and the Dirac discrepancy -------------------------------

TEST(WeylQuantizeTest, Examples) {
  EXPECT_EQ(weyl_quantize(CPolynomial::monomial(2, 0)), q() * q());
  EXPECT_EQ(weyl_quantize(CPolynomial::monomial(1, 1)),
            ComplexRational::fraction(1, 2) * (q() * p() + p() * q()));
  EXPECT_EQ(weyl_quantize(CPolynomial::monomial(2, 1)),
            ComplexRational::fraction(1, 3) * (q() * q() * p() + q() * p() * q() + p() * q() * q()));
}

TEST(WeylQuantizeTest, Linear) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const CPolynomial f = random_classical(rng, 4);
    const CPolynomial g = random_classical(rng, 4);
    const ComplexRational s(Rational(3, 7), Rational(-1, 2));
    EXPECT_EQ(weyl_quantize(f + s * g), weyl_quantize(f) + s * weyl_quantize(g));
  }
}

TEST(WeylQuantizeTest, NormalFormOfQ2P2) {
  // hand computation over the six interleavings of qqpp
  const NCPolynomial expected = NCPolynomial::monomial(2, 2) +
                                NCPolynomial::monomial(1, 1, ComplexRational(0, -2), 1) +
                                NCPolynomial::constant(ComplexRational::fraction(-1, 2), 2);
  EXPECT_EQ(normal_order(weyl_quantize(CPolynomial::monomial(2, 2))), expected);
}

TEST(DiracDiscrepancyTest, DegreeTwoExactness) {
  for (int a1 = 0; a1 <= 2; ++a1) {
    for (int b1 = 0; a1 + b1 <= 2; ++b1) {
      for (int a2 = 0; a2 <= 2; ++a2) {
        for (int b2 = 0; a2 + b2 <= 2; ++b2) {
          EXPECT_TRUE(dirac_discrepancy(CPolynomial::monomial(a1, b1),
                                        CPolynomial::monomial(a2, b2))
                          .is_zero())
              << a1 << b1 << a2 << b2;
        }
      }
    }
  }
}

TEST(DiracDiscrepancyTest, LinearFirstArgument) {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    EXPECT_TRUE(dirac_discrepancy(CPolynomial::x(), random_classical(rng, 5)).is_zero());
  }
}

TEST(DiracDiscrepancyTest, GroenewoldConstant) {
  // independent brute force: enumerate the Weyl orderings by hand, normal-order
  // with the fold oracle, and subtract i hbar W(9 q^2 p^2)
  const NCPolynomial q3 = q() * q() * q();
  const NCPolynomial p3 = p() * p() * p();
  NCPolynomial w22;
  for (const char* word : {"qqpp", "qpqp", "qppq", "pqqp", "pqpq", "ppqq"}) {
    w22.add_term(word, 0, ComplexRational::fraction(1, 6));
  }
  const NCPolynomial brute =
      oracle_normal_order(q3 * p3 - p3 * q3 - ComplexRational(0, 9) * hb() * w22);
  const NCPolynomial expected = NCPolynomial::constant(ComplexRational(0, Rational(-3, 2)), 3);
  ASSERT_EQ(brute, expected);
  EXPECT_EQ(dirac_discrepancy(CPolynomial::monomial(3, 0), CPolynomial::monomial(0, 3)), expected);
}

// --- canonical maps and Lagrange brackets -----------------------------------

TEST(LagrangeBracketTest, Examples) {
  const CanonicalMap id = CanonicalMap::linear(1, 0, 0, 1, "identity");
  EXPECT_EQ(lagrange_bracket(id, MapVar::u, MapVar::v), CPolynomial::constant(1));
  EXPECT_EQ(lagrange_bracket(id, MapVar::v, MapVar::u), CPolynomial::constant(-1));
  EXPECT_TRUE(lagrange_bracket(id, MapVar::u, MapVar::u).is_zero());

  const CanonicalMap scale = CanonicalMap::linear(Rational(7, 3), 0, 0, Rational(3, 7), "scale");
  EXPECT_EQ(lagrange_bracket(scale, MapVar::u, MapVar::v), CPolynomial::constant(1));
  EXPECT_TRUE(scale.is_canonical());

  // rational points on the unit circle: cos = (1-t^2)/(1+t^2), sin = 2t/(1+t^2)
  for (int k = 1; k <= 6; ++k) {
    const Rational t(k, 7);
    const Rational c = (1 - t * t) / (1 + t * t);
    const Rational s = 2 * t / (1 + t * t);
    const CanonicalMap rot = CanonicalMap::linear(c, -s, s, c, "rotation");
    EXPECT_EQ(lagrange_bracket(rot, MapVar::u, MapVar::v), CPolynomial::constant(1));
  }
}

TEST(LagrangeBracketTest, NonlinearShearIsCanonical) {
  // q = u, p = v + u^2 has unit Jacobian
  CanonicalMap shear;
  shear.q_expr = CPolynomial::x();
  shear.p_expr = CPolynomial::y() + CPolynomial::monomial(2, 0);
  EXPECT_TRUE(shear.is_canonical());
  EXPECT_EQ(lagrange_bracket(shear, MapVar::u, MapVar::v), CPolynomial::constant(1));
}

TEST(LagrangeBracketTest, InverseTransposeOfPoissonMatrix) {
  SplitMix64 rng(17);
  int checked = 0;
  while (checked < 40) {
    auto r = [&] { return Rational(static_cast<long long>(rng.next() % 11) - 5, 1 + rng.next() % 4); };
    const Rational m11 = r(), m12 = r(), m21 = r(), m22 = r();
    const Rational det = m11 * m22 - m12 * m21;
    if (det == 0) continue;
    ++checked;
    const CanonicalMap map = CanonicalMap::linear(m11, m12, m21, m22);
    // inverse map, as polynomials in (q, p)
    const CPolynomial u = CPolynomial::monomial(1, 0, ComplexRational(m22 / det)) +
                          CPolynomial::monomial(0, 1, ComplexRational(-m12 / det));
    const CPolynomial v = CPolynomial::monomial(1, 0, ComplexRational(-m21 / det)) +
                          CPolynomial::monomial(0, 1, ComplexRational(m11 / det));
    const CPolynomial w[2] = {u, v};
    const MapVar vars[2] = {MapVar::u, MapVar::v};
    ComplexRational pm[2][2];
    ComplexRational lm[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        pm[i][j] = classical_poisson(w[i], w[j]).coefficient(0, 0);
        lm[i][j] = lagrange_bracket(map, vars[i], vars[j]).coefficient(0, 0);
      }
    }
    const ComplexRational pdet = pm[0][0] * pm[1][1] - pm[0][1] * pm[1][0];
    // (P^{-1})^T
    const ComplexRational inv_t[2][2] = {{pm[1][1] / pdet, -pm[1][0] / pdet},
                                         {-pm[0][1] / pdet, pm[0][0] / pdet}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) EXPECT_EQ(lm[i][j], inv_t[i][j]);
    }
  }
}

// --- parser -----------------------------------------------------------------

TEST(ParserTest, Grammar) {
  EXPECT_EQ(parse_nc("3/2*i*hbar^2*q^2*p"),
            NCPolynomial::monomial(2, 1, ComplexRational(0, Rational(3, 2)), 2));
  EXPECT_EQ(parse_nc("q*p - p*q"), q() * p() - p() * q());
  EXPECT_EQ(parse_nc("  q * p-p *q "), q() * p() - p() * q());
  EXPECT_EQ(parse_nc("-(q + 0.25*p)^2"), -((q() + ComplexRational::fraction(1, 4) * p()) *
                                           (q() + ComplexRational::fraction(1, 4) * p())));
  EXPECT_EQ(parse_nc("0"), NCPolynomial{});
  EXPECT_EQ(parse_classical("p*q - q*p"), CPolynomial{});
}

TEST(ParserTest, Errors) {
  EXPECT_THROW(parse_nc("q*"), ParseError);
  EXPECT_THROW(parse_nc("x"), ParseError);
  EXPECT_THROW(parse_nc("q/p"), ParseError);
  EXPECT_THROW(parse_nc("(q"), ParseError);
  EXPECT_THROW(parse_nc("q^"), ParseError);
  EXPECT_THROW(parse_nc("1/0"), std::exception);
}

TEST(ParserTest, RenderRoundTrip) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const NCPolynomial poly = random_nc(rng, 5, 4) *
                              ComplexRational(Rational(1 + rng.next() % 5, 1 + rng.next() % 3));
    EXPECT_EQ(parse_nc(poly.to_string()), poly) << poly.to_string();
  }
  EXPECT_EQ(nc_commutator(NCPolynomial::monomial(3, 0), NCPolynomial::monomial(0, 3)).to_string(),
            "9*i*hbar*q^2*p^2 + 18*hbar^2*q*p - 6*i*hbar^3");
}

// --- evaluation on representations -----------------------------------------

TEST(EvaluateTest, Examples) {
  const Representation lad3 = truncated_ladder(3);
  EXPECT_EQ(evaluate(NCPolynomial::one(), lad3).matrix(), Matrix::Identity(3, 3));

  Eigen::VectorXcd d3(3);
  d3 << kI, kI, -2.0 * kI;
  EXPECT_LT(test_support::max_diff(evaluate(parse_nc("q*p - p*q"), lad3), Matrix(d3.asDiagonal())), 1e-14);

  Eigen::VectorXcd d4(4);
  d4 << 1, 3, 5, 3;  // top level distorted by the cutoff
  EXPECT_LT(test_support::max_diff(evaluate(parse_nc("p^2 + q^2"), truncated_ladder(4)),
                              Matrix(d4.asDiagonal())),
            1e-14);
}

TEST(EvaluateTest, NumericHbar) {
  const Representation lad = truncated_ladder(6, 1.0, 1.0, 0.5);
  const Operator lhs = evaluate(parse_nc("q*p - p*q - i*hbar"), lad);
  EXPECT_LT(lhs.interior(1).norm(), 1e-14);
}
