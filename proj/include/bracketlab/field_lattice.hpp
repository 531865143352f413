#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bracketlab/operator.hpp"
#include "bracketlab/reps.hpp"
#include "bracketlab/residual_report.hpp"

namespace bracketlab {

enum class Boundary { open, periodic };
enum class Statistics { boson, fermion };

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }
inline const char* to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

inline constexpr int kMaxLatticeDim = 4096;

struct LatticeSpec {
  int sites = 2;
  double dx = 1.0;
  Boundary boundary = Boundary::open;
  Statistics statistics = Statistics::fermion;
  int n_max = 2;                  ///< boson occupation cutoff
  std::vector<double> potential;  ///< V_x; empty means zero

  int hilbert_dim() const {
    const int local = statistics == Statistics::fermion ? 2 : n_max + 1;
    long long d = 1;
    for (int i = 0; i < sites; ++i) {
      d *= local;
      if (d > kMaxLatticeDim) return kMaxLatticeDim + 1;
    }
    return static_cast<int>(d);
  }

  double potential_at(int x) const { return potential.empty() ? 0.0 : potential.at(x); }

  void validate() const {
    if (sites < 1) throw InvalidArgument("lattice: sites must be positive");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw InvalidArgument("lattice: spacing must be positive");
    if (statistics == Statistics::boson && n_max < 1) throw InvalidArgument("lattice: n_max must be positive");
    if (!potential.empty() && static_cast<int>(potential.size()) != sites) {
      throw InvalidArgument("lattice: potential needs one sample per site");
    }
    if (hilbert_dim() > kMaxLatticeDim) {
      throw InvalidArgument("lattice: Hilbert dimension exceeds " + std::to_string(kMaxLatticeDim));
    }
  }
};

/// psi_x, psi_x^dag and pi_x = i hbar psi_x^dag, all scaled by 1/sqrt(dx).
struct FieldOperators {
  int dim = 0;
  std::vector<Operator> psi;
  std::vector<Operator> psi_dag;
  std::vector<Operator> pi;
};

namespace detail {

inline FieldOperators field_from_modes(std::vector<Operator> modes, double dx, double hbar) {
  FieldOperators f;
  f.dim = modes.front().dim();
  const double s = 1.0 / std::sqrt(dx);
  for (std::size_t x = 0; x < modes.size(); ++x) {
    Operator psi = (modes[x] * s).with_label("psi" + std::to_string(x));
    Operator dag = psi.adjoint().with_label("psi_dag" + std::to_string(x));
    f.pi.push_back((dag * Complex(0.0, hbar)).with_label("pi" + std::to_string(x)));
    f.psi.push_back(std::move(psi));
    f.psi_dag.push_back(std::move(dag));
  }
  return f;
}

}  // namespace detail

inline FieldOperators boson_lattice(const LatticeSpec& spec, double hbar = 1.0) {
  if (spec.statistics != Statistics::boson) throw InvalidArgument("boson_lattice: boson spec required");
  spec.validate();
  const Operator a = truncated_ladder(spec.n_max + 1).aux_op("a");
  const Operator id = Operator::identity(spec.n_max + 1);
  std::vector<Operator> modes;
  for (int x = 0; x < spec.sites; ++x) {
    Operator m = x == 0 ? a : id;
    for (int y = 1; y < spec.sites; ++y) m = kron(m, y == x ? a : id);
    modes.push_back(std::move(m));
  }
  return detail::field_from_modes(std::move(modes), spec.dx, hbar);
}

inline FieldOperators fermion_lattice(const LatticeSpec& spec, double hbar = 1.0) {
  if (spec.statistics != Statistics::fermion) throw InvalidArgument("fermion_lattice: fermion spec required");
  spec.validate();
  return detail::field_from_modes(jordan_wigner(spec.sites).annihilators, spec.dx, hbar);
}

inline FieldOperators field_operators(const LatticeSpec& spec, double hbar = 1.0) {
  return spec.statistics == Statistics::boson ? boson_lattice(spec, hbar) : fermion_lattice(spec, hbar);
}

/// Forward-difference bonds (x, x+1); periodic adds (N-1, 0).
inline std::vector<std::pair<int, int>> lattice_bonds(const LatticeSpec& spec) {
  std::vector<std::pair<int, int>> bonds;
  for (int x = 0; x + 1 < spec.sites; ++x) bonds.emplace_back(x, x + 1);
  if (spec.boundary == Boundary::periodic && spec.sites > 1) bonds.emplace_back(spec.sites - 1, 0);
  return bonds;
}

/// N = sum_x psi_x^dag psi_x dx
inline Operator number_operator(const FieldOperators& f, double dx) {
  Operator n = Operator::zero(f.dim);
  for (std::size_t x = 0; x < f.psi.size(); ++x) n = n + f.psi_dag[x] * f.psi[x] * dx;
  return n.with_label("N");
}

/// H = sum_x [(hbar^2/2m)(grad psi)^dag (grad psi) dx + V_x psi^dag psi dx]
inline Operator schrodinger_field_hamiltonian(const LatticeSpec& spec, double mass, double hbar) {
  if (!(mass > 0.0) || !(hbar > 0.0)) throw InvalidArgument("schrodinger_field_hamiltonian: bad parameters");
  const FieldOperators f = field_operators(spec, hbar);
  const double dx = spec.dx;
  const double kinetic = hbar * hbar / (2.0 * mass) * dx;
  Operator h = Operator::zero(f.dim);
  for (auto [x, y] : lattice_bonds(spec)) {
    const Operator grad = (f.psi[y] - f.psi[x]) * (1.0 / dx);
    h = h + grad.adjoint() * grad * kinetic;
  }
  for (int x = 0; x < spec.sites; ++x) {
    const double v = spec.potential_at(x);
    if (v != 0.0) h = h + f.psi_dag[x] * f.psi[x] * (v * dx);
  }
  return hermitian_part(h).with_label("H_field");
}

/// Matrix of H in the span of psi_x^dag |vac>, |vac> the all-empty basis state.
inline Matrix single_particle_sector(const Operator& h, const FieldOperators& f) {
  const int n = static_cast<int>(f.psi.size());
  Matrix basis(f.dim, n);
  for (int x = 0; x < n; ++x) {
    const Eigen::VectorXcd v = f.psi_dag[x].matrix().col(0);
    basis.col(x) = v / v.norm();
  }
  return basis.adjoint() * h.matrix() * basis;
}

/// Basis indices whose every site occupation is below n_max (boson interior).
inline std::vector<int> boson_interior_indices(const LatticeSpec& spec) {
  const int local = spec.n_max + 1;
  const int dim = spec.hilbert_dim();
  std::vector<int> out;
  for (int i = 0; i < dim; ++i) {
    int rest = i;
    bool inside = true;
    for (int s = 0; s < spec.sites; ++s) {
      if (rest % local == spec.n_max) inside = false;
      rest /= local;
    }
    if (inside) out.push_back(i);
  }
  return out;
}

inline Matrix restrict_to(const Operator& op, const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = op(idx[i], idx[j]);
  }
  return out;
}

/// max over x, y of ||[psi_x, psi_y^dag] - delta_xy/dx|| on the boson interior,
/// together with ||[psi_x, psi_y]||.
inline ResidualReport boson_ccr_residual(const LatticeSpec& spec, double tol = 1e-12) {
  return timed([&] {
    const FieldOperators f = boson_lattice(spec);
    const std::vector<int> idx = boson_interior_indices(spec);
    const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    double worst = 0.0;
    for (int x = 0; x < spec.sites; ++x) {
      for (int y = 0; y < spec.sites; ++y) {
        Matrix c = restrict_to(commutator(f.psi[x], f.psi_dag[y]), idx);
        if (x == y) c -= id / spec.dx;
        worst = std::max({worst, c.norm(), commutator(f.psi[x], f.psi[y]).norm()});
      }
    }
    return ResidualReport::make("boson_ccr",
                                "sites=" + std::to_string(spec.sites) + " n_max=" + std::to_string(spec.n_max),
                                f.dim, worst, tol);
  });
}

/// max over x, y of ||{psi_x, psi_y^dag} - delta_xy/dx|| and ||{psi_x, psi_y}||.
inline ResidualReport fermion_car_residual(const LatticeSpec& spec, double tol = 1e-12) {
  return timed([&] {
    const FieldOperators f = fermion_lattice(spec);
    const Operator id = Operator::identity(f.dim);
    double worst = 0.0;
    for (int x = 0; x < spec.sites; ++x) {
      for (int y = 0; y < spec.sites; ++y) {
        Operator c = anticommutator(f.psi[x], f.psi_dag[y]);
        if (x == y) c = c - id * (1.0 / spec.dx);
        worst = std::max({worst, c.norm(), anticommutator(f.psi[x], f.psi[y]).norm()});
      }
    }
    return ResidualReport::make("fermion_car", "sites=" + std::to_string(spec.sites), f.dim, worst, tol);
  });
}

/// max over x, y of ||[psi_x, pi_y]_+ - i hbar delta_xy/dx||
inline ResidualReport lagrange_field_check(const LatticeSpec& spec, double hbar, double tol = 1e-12) {
  if (spec.statistics != Statistics::fermion) throw InvalidArgument("lagrange_field_check: fermion spec required");
  return timed([&] {
    const FieldOperators f = fermion_lattice(spec, hbar);
    const Operator id = Operator::identity(f.dim);
    double worst = 0.0;
    for (int x = 0; x < spec.sites; ++x) {
      for (int y = 0; y < spec.sites; ++y) {
        Operator c = anticommutator(f.psi[x], f.pi[y]);
        if (x == y) c = c - id * Complex(0.0, hbar / spec.dx);
        worst = std::max(worst, c.norm());
      }
    }
    return ResidualReport::make("lagrange_field", "sites=" + std::to_string(spec.sites), f.dim, worst, tol);
  });
}

/// Sorted eigenvalues of a Hermitian operator.
inline std::vector<double> sorted_spectrum(const Operator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

/// All 2^n subset sums of the single-particle levels, sorted.
inline std::vector<double> subset_sums(const std::vector<double>& levels) {
  std::vector<double> sums{0.0};
  for (double e : levels) {
    const std::size_t n = sums.size();
    for (std::size_t i = 0; i < n; ++i) sums.push_back(sums[i] + e);
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

/// Free-fermion many-body spectrum against subset sums of the single-particle levels.
inline ResidualReport free_fermion_spectrum_check(const LatticeSpec& spec, double mass, double hbar,
                                                  double tol = 1e-9) {
  return timed([&] {
    const Operator h = schrodinger_field_hamiltonian(spec, mass, hbar);
    const FieldOperators f = fermion_lattice(spec, hbar);
    const Operator single(single_particle_sector(h, f));
    const std::vector<double> many = sorted_spectrum(h);
    const std::vector<double> oracle = subset_sums(sorted_spectrum(single));
    double worst = 0.0;
    for (std::size_t i = 0; i < many.size(); ++i) worst = std::max(worst, std::abs(many[i] - oracle[i]));
    return ResidualReport::make("free_fermion_spectrum",
                                std::string(to_string(spec.boundary)) + " sites=" + std::to_string(spec.sites),
                                h.dim(), worst, tol);
  });
}

inline ResidualReport number_conservation(const LatticeSpec& spec, double mass, double hbar,
                                          double tol = 1e-12) {
  return timed([&] {
    const Operator h = schrodinger_field_hamiltonian(spec, mass, hbar);
    const Operator n = number_operator(field_operators(spec, hbar), spec.dx);
    return ResidualReport::make("number_conservation",
                                std::string(to_string(spec.statistics)) + " sites=" + std::to_string(spec.sites),
                                h.dim(), commutator(h, n).norm(), tol);
  });
}

}  // namespace bracketlab
