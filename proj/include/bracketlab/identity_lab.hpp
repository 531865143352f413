#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <string>
#include <vector>

#include "bracketlab/operator.hpp"
#include "bracketlab/reps.hpp"
#include "bracketlab/residual_report.hpp"

namespace bracketlab {

// Bracket identities checked numerically with every Poisson bracket replaced by
// kappa^{-1} [.,.] and every Lagrange bracket by kappa_bar^{-1} [.,.]_+. Under
// that substitution the identities hold exactly, so the residuals measure the
// machinery, not physics.

inline constexpr double kIdentityTolerance = 1e-12;

namespace detail {

inline double norm_product(std::initializer_list<const Operator*> ops) {
  double p = 1.0;
  for (const Operator* o : ops) p *= o->norm();
  return p;
}

inline void require_equal_dims(std::initializer_list<const Operator*> ops, const char* what) {
  const int d = (*ops.begin())->dim();
  for (const Operator* o : ops) {
    if (o->dim() != d) throw DimensionMismatch(std::string(what) + ": operand dimensions differ");
  }
}

}  // namespace detail

/// ||[A,[B,C]] + [C,[A,B]] + [B,[C,A]]||
inline ResidualReport jacobi_residual(const Operator& a, const Operator& b, const Operator& c,
                                      double tol = kIdentityTolerance, std::uint64_t seed = 0) {
  detail::require_equal_dims({&a, &b, &c}, "jacobi_residual");
  return timed([&] {
    const Operator sum = commutator(a, commutator(b, c)) + commutator(c, commutator(a, b)) +
                         commutator(b, commutator(c, a));
    return ResidualReport::make("jacobi", "A,B,C", a.dim(), sum.norm(),
                                tol * (1.0 + detail::norm_product({&a, &b, &c})), seed);
  });
}

/// ||[[A,B]_+,C] + [[B,C]_+,A] + [[C,A]_+,B]||
inline ResidualReport graded_jacobi_residual(const Operator& a, const Operator& b,
                                             const Operator& c, double tol = kIdentityTolerance,
                                             std::uint64_t seed = 0) {
  detail::require_equal_dims({&a, &b, &c}, "graded_jacobi_residual");
  return timed([&] {
    const Operator sum = commutator(anticommutator(a, b), c) +
                         commutator(anticommutator(b, c), a) +
                         commutator(anticommutator(c, a), b);
    return ResidualReport::make("graded_jacobi", "A,B,C", a.dim(), sum.norm(),
                                tol * (1.0 + detail::norm_product({&a, &b, &c})), seed);
  });
}

/// ||[[A,B]_+,C]_+ + [[B,C]_+,A]_+ + [[C,A]_+,B]_+||; generically nonzero, a
/// witness that the anti-commutator (and so the substituted Lagrange bracket)
/// obeys no Jacobi identity.
inline double anticommutator_jacobi_defect(const Operator& a, const Operator& b, const Operator& c) {
  detail::require_equal_dims({&a, &b, &c}, "anticommutator_jacobi_defect");
  return (anticommutator(anticommutator(a, b), c) + anticommutator(anticommutator(b, c), a) +
          anticommutator(anticommutator(c, a), b))
      .norm();
}

enum class DiracMode { four_op, three_op, poisson_only };

inline const char* to_string(DiracMode m) {
  switch (m) {
    case DiracMode::four_op: return "dirac_four_op";
    case DiracMode::three_op: return "dirac_three_op";
    case DiracMode::poisson_only: return "poisson_only";
  }
  return "dirac";
}

/// Dirac's consistency relations with {u, v} -> kappa^{-1} [u, v]:
///  four_op:      {u1,v1}[u2,v2] - [u1,v1]{u2,v2}
///  three_op:     {a,[b,c]} - [a,{b,c}] over the three cyclic orders of (a,b,c) = (u1,v1,u2)
///  poisson_only: {a,b}c + b{a,c} + {b,c}a - a{b,c} - {a,c}b - c{a,b}
/// three_op and poisson_only ignore v2. The reported residual is the largest
/// norm over the evaluated relations.
inline ResidualReport dirac_consistency_residual(const Operator& u1, const Operator& v1,
                                                 const Operator& u2, const Operator& v2,
                                                 DiracMode mode, const QuantizationConstants& k,
                                                 double tol = kIdentityTolerance,
                                                 std::uint64_t seed = 0) {
  detail::require_equal_dims({&u1, &v1, &u2, &v2}, "dirac_consistency_residual");
  return timed([&] {
    const Complex inv_kappa = 1.0 / k.kappa();
    auto pb = [&](const Operator& x, const Operator& y) { return commutator(x, y) * inv_kappa; };
    double residual = 0.0;
    double scale = 0.0;
    switch (mode) {
      case DiracMode::four_op: {
        residual = (pb(u1, v1) * commutator(u2, v2) - commutator(u1, v1) * pb(u2, v2)).norm();
        scale = detail::norm_product({&u1, &v1, &u2, &v2}) / k.hbar;
        break;
      }
      case DiracMode::three_op: {
        const Operator* ops[3] = {&u1, &v1, &u2};
        for (int r = 0; r < 3; ++r) {
          const Operator& a = *ops[r];
          const Operator& b = *ops[(r + 1) % 3];
          const Operator& c = *ops[(r + 2) % 3];
          residual = std::max(residual, (pb(a, commutator(b, c)) - commutator(a, pb(b, c))).norm());
        }
        scale = detail::norm_product({&u1, &v1, &u2}) / k.hbar;
        break;
      }
      case DiracMode::poisson_only: {
        const Operator& a = u1;
        const Operator& b = v1;
        const Operator& c = u2;
        const Operator lhs = pb(a, b) * c + b * pb(a, c) + pb(b, c) * a;
        const Operator rhs = a * pb(b, c) + pb(a, c) * b + c * pb(a, b);
        residual = (lhs - rhs).norm();
        scale = detail::norm_product({&u1, &v1, &u2}) / k.hbar;
        break;
      }
    }
    return ResidualReport::make(to_string(mode), "u1,v1,u2,v2", u1.dim(), residual,
                                tol * (1.0 + scale), seed);
  });
}

/// kappa_bar [(a,b), c] - [[a,b]_+, c] with (a,b) -> kappa_bar^{-1} [a,b]_+,
/// maximised over the three cyclic orders.
inline ResidualReport lagrange_condition_residual(const Operator& a, const Operator& b,
                                                  const Operator& c, const QuantizationConstants& k,
                                                  double tol = kIdentityTolerance,
                                                  std::uint64_t seed = 0) {
  detail::require_equal_dims({&a, &b, &c}, "lagrange_condition_residual");
  return timed([&] {
    const double kb = k.kappa_bar();
    auto lb = [&](const Operator& x, const Operator& y) { return anticommutator(x, y) * (1.0 / kb); };
    const Operator* ops[3] = {&a, &b, &c};
    double residual = 0.0;
    for (int r = 0; r < 3; ++r) {
      const Operator& x = *ops[r];
      const Operator& y = *ops[(r + 1) % 3];
      const Operator& z = *ops[(r + 2) % 3];
      residual = std::max(residual,
                          (commutator(lb(x, y), z) * kb - commutator(anticommutator(x, y), z)).norm());
    }
    return ResidualReport::make("lagrange_condition", "a,b,c", a.dim(), residual,
                                tol * (1.0 + detail::norm_product({&a, &b, &c})), seed);
  });
}

// ---------------------------------------------------------------------------
// Trace anomaly

struct TraceAnomalyCertificate {
  ResidualReport report;  ///< residual = sup |tr[A,B]| over the samples
  double identity_trace = 0.0;  ///< |tr(i hbar I)| = hbar * dim
  bool infeasible = false;
  std::string verdict;
  /// Truncated-ladder contrast (dim >= 2): corner entry of [Q,P] and the
  /// interior residual ||[Q,P] - i hbar I|| on the leading dim-1 block.
  Complex ladder_corner{0.0, 0.0};
  double ladder_interior_residual = 0.0;
};

/// Certificate that [A,B] = i hbar I has no solution in dimension `dim`:
/// sampled commutators are traceless while tr(i hbar I) = i hbar dim.
inline TraceAnomalyCertificate trace_anomaly_certificate(int dim, const QuantizationConstants& k,
                                                         int samples = 16, std::uint64_t seed = 0,
                                                         double tol = kIdentityTolerance) {
  if (dim < 1) throw InvalidArgument("trace_anomaly_certificate: dim must be >= 1");
  TraceAnomalyCertificate cert;
  cert.report = timed([&] {
    double sup_trace = 0.0;
    double sup_scale = 0.0;
    for (int s = 0; s < samples; ++s) {
      const Operator a = random_hermitian(dim, derive_seed(seed, 2 * s));
      const Operator b = random_hermitian(dim, derive_seed(seed, 2 * s + 1));
      sup_trace = std::max(sup_trace, std::abs(commutator(a, b).trace()));
      sup_scale = std::max(sup_scale, a.norm() * b.norm());
    }
    return ResidualReport::make("trace_anomaly", "sampled Hermitian pairs", dim, sup_trace,
                                tol * dim * (1.0 + sup_scale), seed);
  });
  cert.identity_trace = std::abs((Operator::identity(dim) * k.kappa()).trace());
  cert.infeasible = cert.report.pass && std::abs(cert.identity_trace - k.hbar * dim) <= 1e-12 * k.hbar * dim;
  cert.verdict = cert.infeasible ? "CCR unsatisfiable in finite dimension" : "inconclusive";
  if (dim >= 2) {
    const Representation lad = truncated_ladder(dim, 1.0, 1.0, k.hbar);
    const Operator ccr = commutator(lad.Q, lad.P);
    cert.ladder_corner = ccr(dim - 1, dim - 1);
    cert.ladder_interior_residual =
        (ccr - Operator::identity(dim) * k.kappa()).interior(1).norm();
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Mixing of quantization rules

/// r(A,B) = ||[A,B] - i hbar I||^2 + ||[A,B]_+ - hbar I||^2, split by term.
struct JointResidual {
  double commutator_term = 0.0;
  double anticommutator_term = 0.0;
  double total() const { return commutator_term + anticommutator_term; }
};

inline JointResidual joint_residual(const Operator& a, const Operator& b, double hbar) {
  const Operator id = Operator::identity(a.dim());
  const double c = (commutator(a, b) - id * Complex(0.0, hbar)).norm();
  const double s = (anticommutator(a, b) - id * hbar).norm();
  return {c * c, s * s};
}

/// Gradient of r with respect to Hermitian A and B (Frobenius inner product),
/// projected onto Hermitian matrices.
inline std::pair<Operator, Operator> joint_residual_gradient(const Operator& a, const Operator& b,
                                                             double hbar) {
  const Operator id = Operator::identity(a.dim());
  const Operator x = commutator(a, b) - id * Complex(0.0, hbar);
  const Operator y = anticommutator(a, b) - id * hbar;
  const Operator ga = (x * b - b * x + y * b + b * y) * 2.0;
  const Operator gb = (a * x - x * a + a * y + y * a) * 2.0;
  return {hermitian_part(ga), hermitian_part(gb)};
}

struct MixingResult {
  ResidualReport report;  ///< residual = relative shortfall of the minimum below the bound
  double best = 0.0;
  double bound = 0.0;
  JointResidual best_terms;
};

inline constexpr int kMixingIterations = 500;

/// Minimise r over Hermitian pairs by gradient descent with random restarts
/// (step halving on non-decrease) and compare with the analytic lower bound
/// hbar^2 dim, which follows from |tr([A,B] - i hbar I)|^2 / dim since tr[A,B] = 0.
inline MixingResult mixing_feasibility_bound(int dim, int restarts, const QuantizationConstants& k,
                                             std::uint64_t seed,
                                             int iterations = kMixingIterations) {
  if (dim < 2 || dim > 8) throw InvalidArgument("mixing_feasibility_bound: dim must lie in [2, 8]");
  if (restarts < 1) throw InvalidArgument("mixing_feasibility_bound: restarts must be >= 1");
  const double hbar = k.hbar;
  MixingResult out;
  out.bound = hbar * hbar * dim;
  out.report = timed([&] {
    double best = std::numeric_limits<double>::infinity();
    JointResidual best_terms;
    for (int r = 0; r < restarts; ++r) {
      const double start_scale = std::sqrt(hbar / dim);
      Operator a = random_hermitian(dim, derive_seed(seed, 2 * r)) * start_scale;
      Operator b = random_hermitian(dim, derive_seed(seed, 2 * r + 1)) * start_scale;
      JointResidual cur = joint_residual(a, b, hbar);
      double step = 0.1 / hbar;
      for (int it = 0; it < iterations; ++it) {
        auto [ga, gb] = joint_residual_gradient(a, b, hbar);
        const Operator na = a - ga * step;
        const Operator nb = b - gb * step;
        const JointResidual next = joint_residual(na, nb, hbar);
        if (next.total() < cur.total()) {
          a = na;
          b = nb;
          cur = next;
          step *= 1.5;
        } else {
          step *= 0.5;
          if (step < 1e-300) break;
        }
      }
      if (cur.total() < best) {
        best = cur.total();
        best_terms = cur;
      }
    }
    out.best = best;
    out.best_terms = best_terms;
    const double shortfall = std::max(0.0, out.bound - best) / out.bound;
    return ResidualReport::make("mixing_feasibility",
                                "restarts=" + std::to_string(restarts), dim, shortfall, 1e-6, seed);
  });
  return out;
}

}  // namespace bracketlab
