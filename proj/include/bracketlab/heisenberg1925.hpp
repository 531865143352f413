#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bracketlab/operator.hpp"
#include "bracketlab/reps.hpp"
#include "bracketlab/residual_report.hpp"
#include "bracketlab/symbolic/polynomial.hpp"

namespace bracketlab {

enum class AnharmonicKind { cubic, quartic };

inline const char* to_string(AnharmonicKind k) {
  return k == AnharmonicKind::cubic ? "cubic" : "quartic";
}

inline int degree_of(AnharmonicKind k) { return k == AnharmonicKind::cubic ? 3 : 4; }

/// H = P^2/2m + m w^2 Q^2/2 + g Q^k on a truncated ladder.
struct AnharmonicSpec {
  Representation base;
  double g = 0.0;
  AnharmonicKind kind = AnharmonicKind::cubic;
  /// Levels that must come out truncation-clean when the Hamiltonian is built.
  int validated_levels = 10;

  static AnharmonicSpec make(int dim, double g, AnharmonicKind kind,
                             PhysicalParams params = {}) {
    return {truncated_ladder(dim, params.mass, params.omega, params.hbar), g, kind, 10};
  }
};

namespace detail {

inline Eigen::SelfAdjointEigenSolver<Matrix> diagonalize(const Operator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const double bound = h.dim() * std::numeric_limits<double>::epsilon() * h.norm();
  for (int j = 0; j < h.dim(); ++j) {
    const double r = (h.matrix() * es.eigenvectors().col(j) -
                      es.eigenvalues()(j) * es.eigenvectors().col(j))
                         .norm();
    if (r > bound) {
      throw NumericalError("eigensolver backward error " + std::to_string(r) + " exceeds " +
                           std::to_string(bound));
    }
  }
  return es;
}

/// Weight of a unit vector on its last `tail` components.
inline double tail_weight(const Eigen::VectorXcd& v, int tail) {
  return v.tail(tail).squaredNorm();
}

}  // namespace detail

/// Build and validate the anharmonic Hamiltonian. The lowest validated levels
/// must be non-degenerate and carry negligible weight near the cutoff;
/// otherwise the coupling is too strong for the truncation and the input is
/// rejected.
inline Operator build_anharmonic(const AnharmonicSpec& spec) {
  const Representation& b = spec.base;
  if (b.kind != RepKind::ladder) throw InvalidArgument("build_anharmonic: base must be a ladder");
  if (!std::isfinite(spec.g)) throw InvalidArgument("build_anharmonic: g must be finite");
  const double m = b.params.mass;
  const double w = b.params.omega;
  const int k = degree_of(spec.kind);
  Operator h = b.P * b.P * (1.0 / (2.0 * m)) + b.Q * b.Q * (0.5 * m * w * w) +
               power(b.Q, k) * spec.g;
  h = hermitian_part(h).with_label(std::string("H_") + to_string(spec.kind));

  // the truncated top state sits at hbar w (dim-1)/2, so only levels below it are checked
  const int levels = std::min(spec.validated_levels, b.dim / 2 - 2);
  if (spec.g != 0.0 && levels > 0) {
    const auto es = detail::diagonalize(h);
    const int tail = std::max(1, b.dim / 8);
    for (int n = 0; n < levels; ++n) {
      if (n > 0 && !(es.eigenvalues()(n) > es.eigenvalues()(n - 1))) {
        throw InvalidArgument("build_anharmonic: low spectrum is not strictly increasing");
      }
      if (detail::tail_weight(es.eigenvectors().col(n), tail) > 1e-3) {
        throw InvalidArgument("build_anharmonic: level " + std::to_string(n) +
                              " reaches the truncation edge; reduce |g| or raise dim");
      }
    }
  }
  return h;
}

/// Energies, transition frequencies and position amplitudes of the lowest k levels.
struct TransitionTable {
  int k = 0;
  double hbar = 1.0;
  std::vector<double> energies;
  Eigen::MatrixXd omega;  ///< omega(n, m) = (E_n - E_m) / hbar
  Matrix x;               ///< x(n, m) = <n|Q|m>

  double max_abs_energy() const {
    double e = 0.0;
    for (double v : energies) e = std::max(e, std::abs(v));
    return e;
  }
};

/// Diagonalize H and tabulate the lowest k eigenpairs (ascending). Each
/// eigenvector's phase is fixed so its largest component is real positive.
inline TransitionTable transition_table(const Operator& h, const Operator& q, int k,
                                        double hbar = 1.0) {
  Operator::require_same_dim(h, q, "transition_table");
  if (k < 1 || k > h.dim()) throw InvalidArgument("transition_table: level count out of range");
  if (!h.is_hermitian(1e-12)) throw InvalidArgument("transition_table: H must be Hermitian");
  const auto es = detail::diagonalize(h);
  Matrix vecs = es.eigenvectors().leftCols(k);
  for (int j = 0; j < k; ++j) {
    Eigen::Index imax = 0;
    vecs.col(j).cwiseAbs().maxCoeff(&imax);
    const Complex c = vecs(imax, j);
    vecs.col(j) *= std::conj(c) / std::abs(c);
  }
  TransitionTable t;
  t.k = k;
  t.hbar = hbar;
  t.energies.resize(k);
  for (int n = 0; n < k; ++n) t.energies[n] = es.eigenvalues()(n);
  t.omega.resize(k, k);
  for (int n = 0; n < k; ++n) {
    for (int m = 0; m < k; ++m) t.omega(n, m) = (t.energies[n] - t.energies[m]) / hbar;
  }
  t.x = vecs.adjoint() * q.matrix() * vecs;
  return t;
}

/// max |w(a,b) + w(b,c) - w(a,c)| over all level triples.
inline ResidualReport ritz_check(const TransitionTable& t) {
  if (t.k < 3) throw InvalidArgument("ritz_check: need at least 3 levels");
  return timed([&] {
    double worst = 0.0;
    for (int a = 0; a < t.k; ++a) {
      for (int b = 0; b < t.k; ++b) {
        for (int c = 0; c < t.k; ++c) {
          worst = std::max(worst, std::abs(t.omega(a, b) + t.omega(b, c) - t.omega(a, c)));
        }
      }
    }
    return ResidualReport::make("ritz", "k=" + std::to_string(t.k), t.k, worst,
                                1e-12 * t.max_abs_energy() / t.hbar);
  });
}

/// max |w(n+1, n) - w| over consecutive levels.
inline ResidualReport spacing_check(const TransitionTable& t, double omega, double tol = 1e-10) {
  double worst = 0.0;
  for (int n = 0; n + 1 < t.k; ++n) worst = std::max(worst, std::abs(t.omega(n + 1, n) - omega));
  return ResidualReport::make("harmonic_spacing", "k=" + std::to_string(t.k), t.k, worst, tol);
}

/// Sum_m (E_m - E_n)|x_nm|^2 over the tabulated levels.
inline double thomas_kuhn_sum(const TransitionTable& t, int n) {
  if (n < 0 || n >= t.k) throw InvalidArgument("thomas_kuhn_sum: level outside the table");
  double s = 0.0;
  for (int m = 0; m < t.k; ++m) s += (t.energies[m] - t.energies[n]) * std::norm(t.x(n, m));
  return s;
}

/// |TRK sum - hbar^2/2m|. Levels within 2*margin of the top of the table are
/// polluted by the cutoff; their reports are flagged as artifacts.
inline ResidualReport thomas_kuhn_check(const TransitionTable& t, int n, double mass, double hbar,
                                        double tol = 1e-8, int margin = 1) {
  if (!(mass > 0.0) || !(hbar > 0.0)) throw InvalidArgument("thomas_kuhn_check: bad parameters");
  return timed([&] {
    const double r = std::abs(thomas_kuhn_sum(t, n) - hbar * hbar / (2.0 * mass));
    ResidualReport rep =
        ResidualReport::make("thomas_kuhn", "n=" + std::to_string(n), t.k, r, tol);
    if (n > t.k - 1 - 2 * margin) rep.as_artifact();
    return rep;
  });
}

/// Rayleigh-Schroedinger correction of the given order (0, 1 or 2) for level n
/// of the anharmonic spec, from exact harmonic matrix elements. Order 0 is the
/// unperturbed level; orders 1 and 2 return only that order's term.
inline double perturbation_energy(const AnharmonicSpec& spec, int n, int order) {
  if (order < 0 || order > 2) throw InvalidArgument("perturbation_energy: order must be 0, 1 or 2");
  if (n < 0) throw InvalidArgument("perturbation_energy: level must be nonnegative");
  const PhysicalParams& pp = spec.base.params;
  const double hw = pp.hbar * pp.omega;
  auto e0 = [&](int level) { return hw * (level + 0.5); };
  if (order == 0) return e0(n);
  const int k = degree_of(spec.kind);
  // big enough that <m|Q^k|n> is untouched by the cutoff for every m
  const int dim = n + k + 2;
  const Representation lad = truncated_ladder(dim, pp.mass, pp.omega, pp.hbar);
  const Operator v = power(lad.Q, k) * spec.g;
  if (order == 1) return v(n, n).real();
  double s = 0.0;
  for (int m = 0; m < dim; ++m) {
    if (m == n) continue;
    const double denom = e0(n) - e0(m);
    if (denom == 0.0) throw NumericalError("perturbation_energy: degenerate denominator");
    s += std::norm(v(m, n)) / denom;
  }
  return s;
}

inline double perturbation_series(const AnharmonicSpec& spec, int n, int order) {
  double e = 0.0;
  for (int o = 0; o <= order; ++o) e += perturbation_energy(spec, n, o);
  return e;
}

/// Exact (truncated) level n of the anharmonic Hamiltonian.
inline double diagonalized_energy(const AnharmonicSpec& spec, int n) {
  const auto es = detail::diagonalize(build_anharmonic(spec));
  return es.eigenvalues()(n);
}

/// Least-squares slope of log|E_diag - E_pert(order 2)| against log g.
inline double perturbation_error_slope(AnharmonicKind kind, int n, const std::vector<double>& gs,
                                       int dim = 64, PhysicalParams params = {}) {
  if (gs.size() < 2) throw InvalidArgument("perturbation_error_slope: need two couplings");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double g : gs) {
    const AnharmonicSpec spec = AnharmonicSpec::make(dim, g, kind, params);
    const double err = std::abs(diagonalized_energy(spec, n) - perturbation_series(spec, n, 2));
    const double x = std::log(g);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double c = static_cast<double>(gs.size());
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

inline ResidualReport perturbation_slope_check(AnharmonicKind kind, int n,
                                               const std::vector<double>& gs, int dim = 64,
                                               double target = 3.0, double half_width = 0.3) {
  return timed([&] {
    const double slope = perturbation_error_slope(kind, n, gs, dim);
    ResidualReport r = ResidualReport::make(
        "perturbation_slope",
        std::string(to_string(kind)) + " n=" + std::to_string(n) + " slope=" + std::to_string(slope),
        dim, std::abs(slope - target), half_width);
    return r;
  });
}

/// Interior norm of (1/i hbar)[P, H] + V'(Q), H = P^2/2m + V(Q); margin = deg V.
inline ResidualReport ehrenfest_residual(const Representation& rep,
                                         const symbolic::CPolynomial& potential,
                                         double tol = 1e-10) {
  const int deg = potential.degree();
  if (deg > 4) throw InvalidArgument("ehrenfest_residual: potential degree must be <= 4");
  return timed([&] {
    const double hbar = rep.params.hbar;
    const Operator h = rep.P * rep.P * (1.0 / (2.0 * rep.params.mass)) + evaluate_in_q(potential, rep);
    const Operator force = evaluate_in_q(potential.derivative(0), rep);
    const Operator defect = commutator(rep.P, h) * (1.0 / Complex(0.0, hbar)) + force;
    const int margin = std::min(std::max(deg, rep.interior_margin), rep.dim - 1);
    return ResidualReport::make("ehrenfest", "V=" + potential.to_string("q", "p"), rep.dim,
                                defect.interior(margin).norm(), tol);
  });
}

}  // namespace bracketlab
