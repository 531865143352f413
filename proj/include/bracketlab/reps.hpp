#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bracketlab/operator.hpp"
#include "bracketlab/residual_report.hpp"
#include "bracketlab/symbolic/polynomial.hpp"

namespace bracketlab {

// ---------------------------------------------------------------------------
// Pauli matrices

inline Operator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return Operator(m, "sigma_x");
}
inline Operator pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return Operator(m, "sigma_y");
}
inline Operator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return Operator(m, "sigma_z");
}
/// |0><1|: lowers an occupied two-level site (basis 0 = empty, 1 = occupied).
inline Operator sigma_minus() {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  return Operator(m, "sigma_minus");
}

// ---------------------------------------------------------------------------
// Representations

enum class RepKind { ladder, clock_shift, pauli_choy, jordan_wigner, custom };

inline const char* to_string(RepKind k) {
  switch (k) {
    case RepKind::ladder: return "ladder";
    case RepKind::clock_shift: return "clock_shift";
    case RepKind::pauli_choy: return "pauli_choy";
    case RepKind::jordan_wigner: return "jordan_wigner";
    case RepKind::custom: return "custom";
  }
  return "custom";
}

/// Mass m, angular frequency omega and hbar, in consistent units.
struct PhysicalParams {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
};

/// A finite-dimensional realization of a canonical pair.
///
/// For clock_shift, Q and P hold the unitary Weyl pair U and V. Entries of Q
/// and P within `interior_margin` of the last index may carry truncation damage.
struct Representation {
  RepKind kind;
  int dim;
  Operator Q;
  Operator P;
  std::map<std::string, Operator> aux;
  PhysicalParams params;
  int interior_margin = 0;

  const Operator& aux_op(const std::string& name) const {
    auto it = aux.find(name);
    if (it == aux.end()) throw InvalidArgument("representation has no auxiliary operator " + name);
    return it->second;
  }
};

/// Truncated harmonic ladder: a|n> = sqrt(n)|n-1> cut at `dim` levels,
/// Q = sqrt(hbar/2 m w)(a + a^dag), P = i sqrt(hbar m w/2)(a^dag - a).
inline Representation truncated_ladder(int dim, double mass = 1.0, double omega = 1.0,
                                       double hbar = 1.0) {
  if (dim < 2) throw InvalidArgument("truncated_ladder: dim must be >= 2");
  if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0)) {
    throw InvalidArgument("truncated_ladder: mass, omega and hbar must be positive");
  }
  Matrix a = Matrix::Zero(dim, dim);
  Eigen::VectorXcd n(dim);
  for (int k = 0; k < dim; ++k) {
    n(k) = static_cast<double>(k);
    if (k > 0) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  const Operator lower(a, "a");
  const Operator raise = lower.adjoint().with_label("a_dag");
  const double xs = std::sqrt(hbar / (2.0 * mass * omega));
  const double ps = std::sqrt(hbar * mass * omega / 2.0);
  Operator Q = ((lower + raise) * xs).with_label("Q");
  Operator P = ((raise - lower) * Complex(0.0, ps)).with_label("P");
  Operator H0 = (P * P * (1.0 / (2.0 * mass)) + Q * Q * (0.5 * mass * omega * omega)).with_label("H0");

  Representation rep{RepKind::ladder, dim, std::move(Q), std::move(P), {}, {mass, omega, hbar}, 1};
  rep.aux.emplace("a", lower);
  rep.aux.emplace("a_dag", raise);
  rep.aux.emplace("N", Operator::diagonal(n, "N"));
  rep.aux.emplace("H0", std::move(H0));
  return rep;
}

/// Clock U = diag(1, w, w^2, ...) and cyclic shift V|k> = |k+1>, w = e^{2 pi i/dim},
/// so that UV = w VU.
inline Representation clock_shift(int dim) {
  if (dim < 2) throw InvalidArgument("clock_shift: dim must be >= 2");
  Eigen::VectorXcd phases(dim);
  Matrix shift = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    phases(k) = std::polar(1.0, 2.0 * std::numbers::pi * k / dim);
    shift((k + 1) % dim, k) = 1.0;
  }
  // exact values where the phase is a quarter turn
  for (int k = 0; k < dim; ++k) {
    if ((4 * k) % dim == 0) {
      const int quarter = (4 * k / dim) % 4;
      const Complex exact[4] = {1.0, kI, -1.0, -kI};
      phases(k) = exact[quarter];
    }
  }
  Operator U = Operator::diagonal(phases, "U");
  Operator V(shift, "V");
  Representation rep{RepKind::clock_shift, dim, U, V, {}, {}, 0};
  rep.aux.emplace("U", std::move(U));
  rep.aux.emplace("V", std::move(V));
  return rep;
}

/// Hermitian 2x2 pair with [q, p]_+ = hbar I:
/// q = sqrt(hbar) sigma_x, p = (sqrt(hbar)/2)(sigma_x + sigma_y).
inline Representation pauli_choy_pair(double hbar = 1.0) {
  if (!(hbar > 0.0)) throw InvalidArgument("pauli_choy_pair: hbar must be positive");
  const double r = std::sqrt(hbar);
  Operator q = (pauli_x() * r).with_label("q");
  Operator p = ((pauli_x() + pauli_y()) * (0.5 * r)).with_label("p");
  Representation rep{RepKind::pauli_choy, 2, std::move(q), std::move(p), {}, {1.0, 1.0, hbar}, 0};
  rep.aux.emplace("sigma_z", pauli_z());
  return rep;
}

/// Jordan-Wigner fermion modes on 2^n_modes states.
struct FermionAlgebra {
  int n_modes;
  int dim;
  std::vector<Operator> annihilators;

  Operator creator(int i) const { return annihilators.at(i).adjoint(); }
  Operator number(int i) const { return creator(i) * annihilators.at(i); }
};

inline constexpr int kMaxFermionModes = 12;

/// c_i = sigma_z^{(i-1)} (x) sigma_minus (x) I^{(n-i)}, mode 0 the leftmost factor.
inline FermionAlgebra jordan_wigner(int n_modes) {
  if (n_modes < 1 || n_modes > kMaxFermionModes) {
    throw InvalidArgument("jordan_wigner: n_modes must lie in [1, " +
                          std::to_string(kMaxFermionModes) + "]");
  }
  FermionAlgebra alg{n_modes, 1 << n_modes, {}};
  alg.annihilators.reserve(n_modes);
  const Operator id2 = Operator::identity(2);
  for (int i = 0; i < n_modes; ++i) {
    Operator c = i == 0 ? sigma_minus() : pauli_z();
    for (int k = 1; k < n_modes; ++k) {
      c = kron(c, k < i ? pauli_z() : (k == i ? sigma_minus() : id2));
    }
    alg.annihilators.push_back(c.with_label("c" + std::to_string(i)));
  }
  return alg;
}

/// Representation view of mode 0 with Q = c_0 and P = i hbar c_0^dag, the
/// field-momentum pairing; every mode is kept in aux as c<i>.
inline Representation jordan_wigner_representation(int n_modes, double hbar = 1.0) {
  FermionAlgebra alg = jordan_wigner(n_modes);
  Operator Q = alg.annihilators[0].with_label("c0");
  Operator P = (alg.creator(0) * Complex(0.0, hbar)).with_label("pi0");
  Representation rep{RepKind::jordan_wigner, alg.dim, Q, P, {}, {1.0, 1.0, hbar}, 0};
  for (int i = 0; i < n_modes; ++i) rep.aux.emplace("c" + std::to_string(i), alg.annihilators[i]);
  return rep;
}

/// Real 2x2 matrix [[m11, m12], [m21, m22]].
struct Mat2 {
  double m11, m12, m21, m22;
  double det() const { return m11 * m22 - m12 * m21; }
};

/// Q' = m11 Q + m12 P, P' = m21 Q + m22 P for det M = 1.
inline Representation canonical_transform(const Representation& rep, const Mat2& m) {
  if (std::abs(m.det() - 1.0) > 1e-14) {
    throw InvalidArgument("canonical_transform: det(M) = " + std::to_string(m.det()) +
                          " is not 1; the map is not canonical");
  }
  Representation out = rep;
  out.Q = (rep.Q * m.m11 + rep.P * m.m12).with_label("Q'");
  out.P = (rep.Q * m.m21 + rep.P * m.m22).with_label("P'");
  return out;
}

/// Parameters of a Weyl pair check; the relation tested is
/// e^{isQ} e^{itP} = e^{i alpha} e^{itP} e^{isQ} (continuous) or UV = e^{i alpha} VU.
struct WeylParams {
  double s = 0.0;
  double t = 0.0;
  double alpha = 0.0;

  /// alpha = -hbar s t
  static WeylParams continuous(double s, double t, double hbar) { return {s, t, -hbar * s * t}; }
  /// alpha = 2 pi / dim
  static WeylParams discrete(int dim) { return {0.0, 0.0, 2.0 * std::numbers::pi / dim}; }
};

/// Residual of the Weyl relation. Clock-shift representations are checked on
/// the full matrix; others on the interior block of the given (or default) margin.
inline ResidualReport weyl_relation_residual(const Representation& rep, const WeylParams& w,
                                             double tolerance = 1e-12,
                                             std::optional<int> margin = std::nullopt) {
  return timed([&] {
    const Complex phase = std::polar(1.0, w.alpha);
    if (rep.kind == RepKind::clock_shift) {
      const Operator& U = rep.Q;
      const Operator& V = rep.P;
      const double r = (U * V - phase * (V * U)).norm();
      return ResidualReport::make("weyl_discrete", "clock_shift d=" + std::to_string(rep.dim),
                                  rep.dim, r, tolerance);
    }
    const int mg = margin.value_or(rep.interior_margin);
    const Operator eq = op_exp(rep.Q * Complex(0.0, w.s));
    const Operator ep = op_exp(rep.P * Complex(0.0, w.t));
    const double r = (eq * ep - phase * (ep * eq)).interior(mg).norm();
    return ResidualReport::make("weyl_continuous",
                                std::string(to_string(rep.kind)) + " d=" + std::to_string(rep.dim) +
                                    " s=" + std::to_string(w.s) + " t=" + std::to_string(w.t) +
                                    " margin=" + std::to_string(mg),
                                rep.dim, r, tolerance);
  });
}

// ---------------------------------------------------------------------------
// Symbolic -> numeric bridge

/// Substitute Q, P for q, p and the numeric hbar for the formal one, keeping
/// word order.
inline Operator evaluate(const symbolic::NCPolynomial& poly, const Representation& rep) {
  if (rep.Q.dim() != rep.dim || rep.P.dim() != rep.dim) {
    throw DimensionMismatch("evaluate: representation operators disagree with its dim");
  }
  Matrix out = Matrix::Zero(rep.dim, rep.dim);
  for (const auto& [key, coeff] : poly.terms()) {
    Complex c = coeff.to_complex() * std::pow(rep.params.hbar, key.hbar_power);
    Matrix word = Matrix::Identity(rep.dim, rep.dim);
    for (char s : key.word) word = word * (s == 'q' ? rep.Q.matrix() : rep.P.matrix());
    out += c * word;
  }
  return Operator(std::move(out));
}

/// Evaluate a commutative polynomial in q alone on Q (order is irrelevant there).
inline Operator evaluate_in_q(const symbolic::CPolynomial& poly, const Representation& rep) {
  Matrix out = Matrix::Zero(rep.dim, rep.dim);
  for (const auto& [key, coeff] : poly.terms()) {
    if (key.b != 0) throw InvalidArgument("evaluate_in_q: polynomial depends on p");
    const Complex c = coeff.to_complex() * std::pow(rep.params.hbar, key.hbar_power);
    out += c * power(rep.Q, key.a).matrix();
  }
  return Operator(std::move(out));
}

}  // namespace bracketlab
