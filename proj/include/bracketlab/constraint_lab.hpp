#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bracketlab/operator.hpp"
#include "bracketlab/reps.hpp"
#include "bracketlab/residual_report.hpp"
#include "bracketlab/symbolic/algebra.hpp"
#include "bracketlab/symbolic/polynomial.hpp"

namespace bracketlab {

/// One multiplier/constraint pair of a total Hamiltonian. Neither operator has
/// to be Hermitian.
struct ConstraintTerm {
  Operator lambda;
  Operator F;
  std::string label;
  std::optional<symbolic::NCPolynomial> F_sym;

  static ConstraintTerm scalar(Complex lambda, const Operator& F, std::string label = "") {
    return {Operator::identity(F.dim()) * lambda, F, std::move(label), std::nullopt};
  }
};

struct ConstraintSystem {
  Operator H;
  std::vector<ConstraintTerm> terms;
  QuantizationConstants constants;
};

/// H_T = H + sum_j sym_product(lambda_j, F_j)
inline Operator total_hamiltonian(const ConstraintSystem& sys) {
  Operator ht = sys.H;
  for (const ConstraintTerm& t : sys.terms) {
    Operator::require_same_dim(sys.H, t.lambda, "total_hamiltonian");
    Operator::require_same_dim(sys.H, t.F, "total_hamiltonian");
    ht = ht + sym_product(t.lambda, t.F);
  }
  return ht.with_label("H_T");
}

/// Largest pairwise commutator norm over {H} u {lambda_j} u {F_j}. With a
/// margin the norms are taken on the interior block.
inline ResidualReport heisenberg_class_check(const ConstraintSystem& sys, double tol = 1e-12,
                                             std::optional<int> margin = std::nullopt) {
  return timed([&] {
    std::vector<const Operator*> family{&sys.H};
    for (const ConstraintTerm& t : sys.terms) {
      Operator::require_same_dim(sys.H, t.lambda, "heisenberg_class_check");
      Operator::require_same_dim(sys.H, t.F, "heisenberg_class_check");
      family.push_back(&t.lambda);
      family.push_back(&t.F);
    }
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      for (std::size_t j = i + 1; j < family.size(); ++j) {
        const Operator c = commutator(*family[i], *family[j]);
        worst = std::max(worst, margin ? c.interior(*margin).norm() : c.norm());
        scale = std::max(scale, family[i]->norm() * family[j]->norm());
      }
    }
    return ResidualReport::make("heisenberg_class", std::to_string(sys.terms.size()) + " terms",
                                sys.H.dim(), worst, tol * (1.0 + scale));
  });
}

/// e^{i H_T t/hbar} G e^{-i H_T t/hbar}, through the spectral decomposition of
/// H_T so that phase errors stay at eps * |E| t / hbar.
inline Operator evolve(const Operator& g, const Operator& ht, double t, double hbar) {
  Operator::require_same_dim(g, ht, "evolve");
  if (!ht.is_hermitian(1e-12)) throw InvalidArgument("evolve: H_T must be Hermitian");
  if (!(hbar > 0.0)) throw InvalidArgument("evolve: hbar must be positive");
  if (t == 0.0) return g;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(ht).matrix());
  if (es.info() != Eigen::Success) throw NumericalError("evolve: eigensolver failed");
  Eigen::VectorXcd phase(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phase.size(); ++i) phase(i) = std::polar(1.0, es.eigenvalues()(i) * t / hbar);
  const Matrix u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  return Operator(u * g.matrix() * u.adjoint());
}

/// Norm of (1/i hbar)[chi, H_T], on the interior block when a margin is given.
inline ResidualReport bracket_conservation(const Operator& chi, const Operator& ht, double hbar,
                                           std::optional<int> margin = std::nullopt,
                                           double tol = 1e-10) {
  Operator::require_same_dim(chi, ht, "bracket_conservation");
  return timed([&] {
    const Operator rate = commutator(chi, ht) * (1.0 / Complex(0.0, hbar));
    const int mg = margin.value_or(0);
    return ResidualReport::make("bracket_conservation", "margin=" + std::to_string(mg), chi.dim(),
                                rate.interior(mg).norm(), tol);
  });
}

// ---------------------------------------------------------------------------
// Ghost group defect

/// Both evaluations of the second variation of G under two ghost-weighted
/// constraint generators.
struct GhostDefect {
  Operator direct;
  Operator two_path;
  double agreement = 0.0;  ///< ||direct - two_path||
};

namespace detail {

inline Operator qbracket(const Operator& a, const Operator& b, double hbar) {
  return commutator(a, b) * (1.0 / Complex(0.0, hbar));
}

}  // namespace detail

/// Ghosts act from the left and are assumed to commute with G, F_i, F_j (they
/// may fail to commute with each other). Then
///   gamma eps {G,{F_i,F_j}} + [gamma,eps] {{G,F_j},F_i}
/// with {.,.} = (1/i hbar)[.,.] and the ghost pair bracket the plain
/// commutator. The two-path form is gamma{eps{G,F_i},F_j} - eps{gamma{G,F_j},F_i}.
inline GhostDefect ghost_defect(const Operator& g, const Operator& fi, const Operator& fj,
                                const Operator& eps, const Operator& gamma, double hbar) {
  for (const Operator* o : {&fi, &fj, &eps, &gamma}) {
    Operator::require_same_dim(g, *o, "ghost_defect");
  }
  using detail::qbracket;
  Operator direct = gamma * eps * qbracket(g, qbracket(fi, fj, hbar), hbar) +
                    commutator(gamma, eps) * qbracket(qbracket(g, fj, hbar), fi, hbar);
  Operator two_path = gamma * qbracket(eps * qbracket(g, fi, hbar), fj, hbar) -
                      eps * qbracket(gamma * qbracket(g, fj, hbar), fi, hbar);
  const double agreement = (direct - two_path).norm();
  return {std::move(direct), std::move(two_path), agreement};
}

inline ResidualReport ghost_defect_report(const Operator& g, const Operator& fi,
                                          const Operator& fj, const Operator& eps,
                                          const Operator& gamma, double hbar, double tol = 1e-12,
                                          std::optional<int> margin = std::nullopt) {
  return timed([&] {
    const GhostDefect d = ghost_defect(g, fi, fj, eps, gamma, hbar);
    return ResidualReport::make("ghost_defect", "G,F_i,F_j,eps,gamma", g.dim(),
                                d.direct.interior(margin.value_or(0)).norm(), tol);
  });
}

// ---------------------------------------------------------------------------
// Canonical equations with a constraint term

struct HamiltonResult {
  /// residual: deviation of (1/i hbar)[Q,H_T], (1/i hbar)[P,H_T] from the
  /// unconstrained right-hand sides dH/dp and -dH/dq (zero when the equations
  /// are unchanged).
  ResidualReport report;
  /// Consistency of the full constrained equations, including the lambda terms.
  double consistency = 0.0;
  Operator q_shift;  ///< lambda dF/dp
  Operator p_shift;  ///< -lambda dF/dq
};

inline HamiltonResult hamilton_residual(const symbolic::NCPolynomial& h_sym, double lambda,
                                        const symbolic::NCPolynomial& f_sym,
                                        const Representation& rep, double tol = 1e-12) {
  using symbolic::Symbol;
  const symbolic::NCPolynomial h = symbolic::normal_order(h_sym);
  const symbolic::NCPolynomial f = symbolic::normal_order(f_sym);
  const double hbar = rep.params.hbar;
  const int margin = std::min(rep.dim - 1, std::max({rep.interior_margin, h.degree(), f.degree()}));

  Stopwatch sw;
  const Operator ht = evaluate(h, rep) + evaluate(f, rep) * lambda;
  const Operator qdot = detail::qbracket(rep.Q, ht, hbar);
  const Operator pdot = detail::qbracket(rep.P, ht, hbar);
  const Operator dh_dp = evaluate(symbolic::formal_derivative(h, Symbol::p), rep);
  const Operator dh_dq = evaluate(symbolic::formal_derivative(h, Symbol::q), rep);
  Operator q_shift = evaluate(symbolic::formal_derivative(f, Symbol::p), rep) * lambda;
  Operator p_shift = evaluate(symbolic::formal_derivative(f, Symbol::q), rep) * (-lambda);

  const double unchanged = std::max((qdot - dh_dp).interior(margin).norm(),
                                    (pdot + dh_dq).interior(margin).norm());
  const double consistency = std::max((qdot - dh_dp - q_shift).interior(margin).norm(),
                                      (pdot + dh_dq - p_shift).interior(margin).norm());
  HamiltonResult out{ResidualReport::make("hamilton",
                                          "H=" + h.to_string() + " F=" + f.to_string() +
                                              " lambda=" + std::to_string(lambda),
                                          rep.dim, unchanged, tol),
                     consistency, std::move(q_shift), std::move(p_shift)};
  out.report.runtime_ms = sw.elapsed_ms();
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial constraint family

struct FHypothesisCoefficients {
  double A = 0, B = 0, C = 0, D = 0;
  double A1 = 0, B1 = 0, C1 = 0, D1 = 0;  ///< primed coefficients
};

/// F = [P,Q] + i hbar I + A P + B P^2 - C P^3 - D P^4 - A' Q + B' Q^2 + C' Q^3 + D' Q^4.
/// The CCR part is anti-Hermitian and vanishes off the cutoff corner; the
/// polynomial part is Hermitian.
inline Operator f_hypothesis(const FHypothesisCoefficients& c, const Representation& rep) {
  if (rep.kind != RepKind::ladder) throw InvalidArgument("f_hypothesis: ladder representation required");
  const Operator& q = rep.Q;
  const Operator& p = rep.P;
  const Operator p2 = p * p;
  const Operator q2 = q * q;
  const Operator ccr = commutator(p, q) + Operator::identity(rep.dim) * Complex(0.0, rep.params.hbar);
  Operator f = ccr + p * c.A + p2 * c.B - p2 * p * c.C - p2 * p2 * c.D - q * c.A1 + q2 * c.B1 +
               q2 * q * c.C1 + q2 * q2 * c.D1;
  return f.with_label("F_hyp");
}

struct SweepRow {
  FHypothesisCoefficients coefficients;
  double class_residual = 0.0;
  double dynamics_deviation = 0.0;
};

/// For each coefficient set, the Heisenberg-class residual of {H0, lambda I, F}
/// and the largest interior deviation of evolve(Q) under H0 + lambda herm(F)
/// from evolve(Q) under H0 over the time grid. The anti-Hermitian CCR part of
/// F is left out of the dynamics; it is zero on the interior.
inline std::vector<SweepRow> f_hypothesis_sweep(const std::vector<FHypothesisCoefficients>& grid,
                                                const Representation& rep, double lambda,
                                                const std::vector<double>& times) {
  const Operator& h0 = rep.aux_op("H0");
  const double hbar = rep.params.hbar;
  const int margin = std::min(rep.dim - 1, 4);
  std::vector<Operator> reference;
  reference.reserve(times.size());
  for (double t : times) reference.push_back(evolve(rep.Q, h0, t, hbar));
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const FHypothesisCoefficients& c : grid) {
    const Operator f = f_hypothesis(c, rep);
    ConstraintSystem sys{h0, {ConstraintTerm::scalar(lambda, f, "F_hyp")}, QuantizationConstants::with_hbar(hbar)};
    SweepRow row{c, heisenberg_class_check(sys, 1e-12, margin).residual, 0.0};
    const Operator ht = h0 + hermitian_part(f) * lambda;
    for (std::size_t i = 0; i < times.size(); ++i) {
      row.dynamics_deviation = std::max(
          row.dynamics_deviation, (evolve(rep.Q, ht, times[i], hbar) - reference[i]).interior(margin).norm());
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bracketlab
