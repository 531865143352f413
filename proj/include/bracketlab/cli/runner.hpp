#pragma once

#include <functional>
#include <future>
#include <string>
#include <vector>

#include "bracketlab/cli/config.hpp"
#include "bracketlab/cli/report.hpp"
#include "bracketlab/constraint_lab.hpp"
#include "bracketlab/field_lattice.hpp"
#include "bracketlab/heisenberg1925.hpp"
#include "bracketlab/identity_lab.hpp"
#include "bracketlab/reps.hpp"
#include "bracketlab/symbolic/algebra.hpp"
#include "bracketlab/symbolic/parser.hpp"

namespace bracketlab::cli {

namespace suites {

using Reports = std::vector<ResidualReport>;

inline ResidualReport artifact(ResidualReport r) {
  r.as_artifact();
  return r;
}

inline ResidualReport with_operands(ResidualReport r, std::string operands) {
  r.operands = std::move(operands);
  return r;
}

inline Reports identities(const SuiteConfig& c) {
  Reports out;
  const int span = c.dim_max - c.dim_min + 1;
  for (int t = 0; t < c.trials; ++t) {
    const int dim = c.dim_min + t % span;
    const std::uint64_t seed = derive_seed(c.seed, static_cast<std::uint64_t>(t));
    const Operator a = random_hermitian(dim, derive_seed(seed, 0));
    const Operator b = random_hermitian(dim, derive_seed(seed, 1));
    const Operator cc = random_hermitian(dim, derive_seed(seed, 2));
    const Operator d = random_hermitian(dim, derive_seed(seed, 3));
    const QuantizationConstants k = QuantizationConstants::with_hbar(0.5 + 0.25 * (t % 4));
    const std::string ops = "H_rand(" + std::to_string(dim) + ") x4, hbar=" + detail::format_double(k.hbar);
    if (c.wants_identity("jacobi")) out.push_back(with_operands(jacobi_residual(a, b, cc, c.tolerance_for("jacobi"), seed), ops));
    if (c.wants_identity("graded_jacobi")) {
      out.push_back(with_operands(graded_jacobi_residual(a, b, cc, c.tolerance_for("graded_jacobi"), seed), ops));
    }
    for (DiracMode m : {DiracMode::four_op, DiracMode::three_op, DiracMode::poisson_only}) {
      const std::string id = to_string(m);
      if (c.wants_identity(id)) {
        out.push_back(with_operands(dirac_consistency_residual(a, b, cc, d, m, k, c.tolerance_for(id), seed), ops));
      }
    }
    if (c.wants_identity("lagrange_condition")) {
      out.push_back(
          with_operands(lagrange_condition_residual(a, b, cc, k, c.tolerance_for("lagrange_condition"), seed), ops));
    }
  }
  if (!c.only.empty()) return out;

  for (int dim = 1; dim <= 16; ++dim) {
    const TraceAnomalyCertificate cert = trace_anomaly_certificate(dim, {}, 16, c.seed);
    ResidualReport r = cert.report;
    r.operands = cert.verdict + ", |tr(i hbar I)|=" + detail::format_double(cert.identity_trace);
    r.pass = cert.infeasible;
    out.push_back(r);
    if (dim >= 2) {
      const double corner_err = std::abs(cert.ladder_corner - Complex(0.0, -(dim - 1.0)));
      out.push_back(ResidualReport::make("ladder_corner", "corner of [Q,P] vs -i hbar (d-1)", dim, corner_err, 1e-12));
    }
  }
  // the corner itself: full-matrix CCR residual is a predicted truncation defect
  {
    const Representation lad = truncated_ladder(8);
    const double full = (commutator(lad.Q, lad.P) - Operator::identity(8) * kI).norm();
    out.push_back(artifact(ResidualReport::make("ccr_full_matrix", "ladder d=8, no interior restriction", 8, full, 1e-12)));
  }
  for (int dim = 2; dim <= 6; ++dim) {
    const MixingResult m = mixing_feasibility_bound(dim, c.mixing_restarts, {}, derive_seed(c.seed, 1000 + dim));
    ResidualReport r = m.report;
    r.operands = "restarts=" + std::to_string(c.mixing_restarts) + " best=" + detail::format_double(m.best) +
                 " bound=" + detail::format_double(m.bound);
    out.push_back(r);
  }
  {
    const Representation choy = pauli_choy_pair(1.0);
    const JointResidual j = joint_residual(choy.Q, choy.P, 1.0);
    ResidualReport r = ResidualReport::make("choy_pair_anticommutator", "pauli_choy hbar=1", 2, j.anticommutator_term, 0.0);
    r.operands += " commutator_term=" + detail::format_double(j.commutator_term);
    r.pass = r.pass && j.commutator_term > 0.0;
    out.push_back(r);
  }
  {
    // anticommutator brackets have no Jacobi identity: expected nonzero
    const double d = anticommutator_jacobi_defect(random_hermitian(3, c.seed), random_hermitian(3, c.seed + 1),
                                                  random_hermitian(3, c.seed + 2));
    out.push_back(artifact(ResidualReport::make("anticommutator_jacobi_witness", "H_rand(3) x3", 3, d, 1e-12, c.seed)));
  }
  return out;
}

inline Reports reps(const SuiteConfig&) {
  Reports out;
  for (int dim = 2; dim <= 64; ++dim) {
    const Representation lad = truncated_ladder(dim);
    const Operator ccr = commutator(lad.Q, lad.P);
    Eigen::VectorXcd profile = Eigen::VectorXcd::Constant(dim, kI);
    profile(dim - 1) = Complex(0.0, -(dim - 1.0));
    const double r = (ccr.matrix() - Matrix(profile.asDiagonal())).cwiseAbs().maxCoeff();
    out.push_back(ResidualReport::make("ccr_profile", "ladder", dim, r, 1e-13 * dim));
    out.push_back(weyl_relation_residual(clock_shift(dim), WeylParams::discrete(dim)));
  }
  out.push_back(weyl_relation_residual(truncated_ladder(64), WeylParams::continuous(0.1, 0.1, 1.0), 1e-6, 8));
  for (int n = 1; n <= 6; ++n) {
    const FermionAlgebra f = jordan_wigner(n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, (f.annihilators[i] * f.annihilators[i]).norm());
      for (int j = 0; j < n; ++j) {
        Operator c = anticommutator(f.annihilators[i], f.creator(j));
        if (i == j) c = c - Operator::identity(f.dim);
        worst = std::max({worst, c.norm(), anticommutator(f.annihilators[i], f.annihilators[j]).norm()});
      }
    }
    out.push_back(ResidualReport::make("jordan_wigner_car", "modes=" + std::to_string(n), f.dim, worst, 1e-12));
  }
  {
    const Representation choy = pauli_choy_pair(1.0);
    out.push_back(ResidualReport::make("choy_rule", "pauli_choy", 2,
                                       (anticommutator(choy.Q, choy.P) - Operator::identity(2)).norm(), 1e-15));
  }
  {
    const Representation lad = truncated_ladder(16);
    for (double theta : {0.3, 1.1, 2.5}) {
      const Representation t = canonical_transform(lad, {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)});
      out.push_back(ResidualReport::make("canonical_transform", "rotation theta=" + detail::format_double(theta), 16,
                                         (commutator(t.Q, t.P) - commutator(lad.Q, lad.P)).norm(), 1e-13));
    }
  }
  return out;
}

inline Reports heisenberg1925(const SuiteConfig& c) {
  Reports out;
  const int dim = c.ladder_dim;
  const AnharmonicSpec harmonic = AnharmonicSpec::make(dim, 0.0, AnharmonicKind::cubic);
  const TransitionTable ht = transition_table(build_anharmonic(harmonic), harmonic.base.Q, 10);
  out.push_back(spacing_check(ht, 1.0));
  out.push_back(with_operands(ritz_check(ht), "harmonic k=10"));

  const AnharmonicSpec cubic = AnharmonicSpec::make(dim, c.cubic_g, AnharmonicKind::cubic);
  const TransitionTable ct = transition_table(build_anharmonic(cubic), cubic.base.Q, 10);
  out.push_back(with_operands(ritz_check(ct), "cubic g=" + detail::format_double(c.cubic_g) + " k=10"));
  const AnharmonicSpec quartic = AnharmonicSpec::make(dim, 0.1, AnharmonicKind::quartic);
  out.push_back(with_operands(ritz_check(transition_table(build_anharmonic(quartic), quartic.base.Q, 10)),
                              "quartic g=0.1 k=10"));

  const TransitionTable full = transition_table(build_anharmonic(harmonic), harmonic.base.Q, dim);
  for (int n = 0; n <= 5; ++n) out.push_back(thomas_kuhn_check(full, n, 1.0, 1.0, 1e-8));
  out.push_back(artifact(thomas_kuhn_check(full, dim - 1, 1.0, 1.0, 1e-8)));

  const std::vector<double> gs{1e-3, 2e-3, 4e-3};
  for (int n = 0; n <= 3; ++n) {
    out.push_back(perturbation_slope_check(AnharmonicKind::quartic, n, gs, dim, 3.0, 0.3));
    // the cubic level is even in g, so its order-2 error falls like g^4
    out.push_back(perturbation_slope_check(AnharmonicKind::cubic, n, gs, dim, 4.0, 0.3));
  }

  const Representation lad = truncated_ladder(dim);
  for (const char* v : {"q^2/2", "q^2/2 + q^3/100", "q^2/2 + q^4/10", "q^2/2 - q^3/20 + q^4/10"}) {
    out.push_back(ehrenfest_residual(lad, symbolic::parse_classical(v), 1e-10));
  }
  out.push_back(ehrenfest_residual(lad, symbolic::CPolynomial{}, 1e-12));
  return out;
}

inline Reports constraints(const SuiteConfig& c) {
  Reports out;
  const double hbar = 1.0;
  {
    const Representation r = truncated_ladder(32);
    const Operator chi = commutator(r.Q, r.P);
    const Operator f1 = commutator(r.P, r.Q) + Operator::identity(32) * kI;
    const ConstraintSystem sys{r.aux_op("H0"),
                               {ConstraintTerm::scalar(Complex(0.0, 0.7), f1, "[P,Q]+i hbar"),
                                ConstraintTerm::scalar(0.3, chi * chi, "chi^2")},
                               QuantizationConstants::with_hbar(hbar)};
    out.push_back(with_operands(heisenberg_class_check(sys), "H0, {0.7i, [P,Q]+i hbar}, {0.3, chi^2}"));
    const Operator ht = total_hamiltonian(sys);
    double worst = 0.0;
    for (const Operator& g : {r.Q, r.P}) {
      for (int i = 0; i <= 40; ++i) {
        const double t = 10.0 * i / 40.0;
        worst = std::max(worst, (evolve(g, ht, t, hbar) - evolve(g, r.aux_op("H0"), t, hbar)).interior(1).norm());
      }
    }
    out.push_back(ResidualReport::make("class_dynamics", "G in {Q,P}, t in [0,10/w]", 32, worst, 1e-10));

    const ConstraintSystem pos{r.aux_op("H0"), {ConstraintTerm::scalar(1.0, r.Q, "Q")}, {}};
    const ResidualReport rq = heisenberg_class_check(pos, 1e-12, 1);
    out.push_back(ResidualReport::make("class_witness_position", "||[H0,Q]|| - hbar||P||/m (interior)", 32,
                                       std::abs(rq.residual - r.P.interior(1).norm()), 1e-10));

    out.push_back(bracket_conservation(chi, r.aux_op("H0"), hbar, 1));
    const Operator quartic = r.aux_op("H0") + power(r.Q, 4) * 0.1;
    out.push_back(with_operands(bracket_conservation(chi, quartic, hbar, 4), "chi vs H0+0.1Q^4, margin 4"));
    out.push_back(artifact(with_operands(bracket_conservation(chi, quartic, hbar), "chi vs H0+0.1Q^4, full matrix")));
  }
  {
    const Representation r = truncated_ladder(20);
    const double e = 0.25;
    const double g = -0.6;
    const GhostDefect d = ghost_defect(r.Q, r.Q * r.Q, r.P * r.P, Operator::identity(20) * e,
                                       Operator::identity(20) * g, hbar);
    out.push_back(ResidualReport::make("ghost_defect_squares", "G=Q, F=Q^2,P^2: vs 4 gamma eps Q", 20,
                                       (d.direct - r.Q * (4 * e * g)).interior(4).norm(), 1e-10));
    out.push_back(ResidualReport::make("ghost_defect_lower_bound", "0.1||G|| / ||defect|| (interior)", 20,
                                       0.1 * r.Q.interior(4).norm() / d.direct.interior(4).norm(), 1.0));
  }
  {
    // functions of one Hermitian matrix commute; unit norm keeps round-off at machine level
    const Operator raw = random_hermitian(6, derive_seed(c.seed, 4000));
    const Operator h = raw * (1.0 / raw.norm());
    const Operator fi = h * h;
    const Operator fj = h * h * h * 0.2 + h;
    const Operator e = Operator::identity(6) * 0.25;
    const Operator g = Operator::identity(6) * -0.6;
    out.push_back(with_operands(ghost_defect_report(h, fi, fj, e, g, hbar, 1e-12), "commuting family G=h, h^2, h^3/5+h"));
  }
  for (int s = 0; s < 100; ++s) {
    const std::uint64_t seed = derive_seed(c.seed, 5000 + s);
    const int n = 2 + s % 5;
    const double hb = 0.5 + 0.1 * (s % 7);
    Operator g = random_hermitian(n, derive_seed(seed, 0)) + random_hermitian(n, derive_seed(seed, 1)) * kI;
    Operator fi = random_hermitian(n, derive_seed(seed, 2));
    Operator fj = random_hermitian(n, derive_seed(seed, 3));
    Operator eps = Operator::identity(n) * 0.3;
    Operator gam = Operator::identity(n) * -0.8;
    std::string kind = "scalar ghosts";
    if (s % 2 == 1) {
      const Operator id2 = Operator::identity(2);
      const Operator idn = Operator::identity(n);
      g = kron(id2, g);
      fi = kron(id2, fi);
      fj = kron(id2, fj);
      eps = kron(pauli_x() * 0.6 + pauli_z() * 0.2, idn);
      gam = kron(pauli_y() * 0.9, idn);
      kind = "pauli ghosts";
    }
    const GhostDefect d = ghost_defect(g, fi, fj, eps, gam, hb);
    out.push_back(ResidualReport::make("ghost_two_path", kind, g.dim(), d.agreement, 1e-10, seed));
  }
  {
    const Representation r = truncated_ladder(16);
    const auto h = symbolic::parse_nc("p^2/2 + q^2/2");
    out.push_back(hamilton_residual(h, 0.0, symbolic::parse_nc("q*p"), r).report);
    out.push_back(hamilton_residual(h, 2.5, symbolic::parse_nc("q*p - p*q"), r).report);
    const HamiltonResult lin = hamilton_residual(h, 0.3, symbolic::parse_nc("q"), r);
    out.push_back(ResidualReport::make("hamilton_shift", "F=q lambda=0.3: P-shift vs -0.3 I", 16,
                                       (lin.p_shift - Operator::identity(16) * -0.3).norm() + lin.q_shift.norm(), 1e-15));
    out.push_back(ResidualReport::make("hamilton_consistency", "F=q lambda=0.3", 16, lin.consistency, 1e-12));
  }
  {
    const Representation r = truncated_ladder(16);
    const std::vector<SweepRow> rows = f_hypothesis_sweep({FHypothesisCoefficients{}}, r, 0.5, {0.0, 2.5, 5.0, 10.0});
    out.push_back(ResidualReport::make("f_hypothesis_ccr_only", "all coefficients zero, dynamics deviation", 16,
                                       rows[0].dynamics_deviation, 1e-10));
    out.push_back(ResidualReport::make("f_hypothesis_interior", "all coefficients zero, ||F|| interior", 16,
                                       f_hypothesis({}, r).interior(1).norm(), 1e-12));
  }
  return out;
}

inline Reports fields(const SuiteConfig& c) {
  Reports out;
  for (int sites = 1; sites <= c.fermion_sites; ++sites) {
    LatticeSpec s;
    s.sites = sites;
    s.dx = c.lattice_dx;
    s.statistics = Statistics::fermion;
    out.push_back(fermion_car_residual(s));
    out.push_back(lagrange_field_check(s, 1.0));
  }
  for (int sites = 1; sites <= 3; ++sites) {
    for (int n_max = 1; n_max <= c.boson_n_max; ++n_max) {
      LatticeSpec s;
      s.sites = sites;
      s.n_max = n_max;
      s.dx = c.lattice_dx;
      s.statistics = Statistics::boson;
      out.push_back(boson_ccr_residual(s));
    }
  }
  {
    // the 1/dx scaling is exact: halving dx doubles the delta coefficient
    LatticeSpec a;
    a.sites = 1;
    a.n_max = 3;
    a.statistics = Statistics::boson;
    a.dx = c.lattice_dx;
    LatticeSpec b = a;
    b.dx = a.dx / 2;
    const Operator ca = commutator(boson_lattice(a).psi[0], boson_lattice(a).psi_dag[0]);
    const Operator cb = commutator(boson_lattice(b).psi[0], boson_lattice(b).psi_dag[0]);
    out.push_back(ResidualReport::make("boson_dx_scaling", "[psi,psi^dag] at dx/2 vs 2x at dx", 4,
                                       (cb - ca * 2.0).norm(), 1e-14));
  }
  for (Boundary bc : {Boundary::open, Boundary::periodic}) {
    LatticeSpec s;
    s.sites = c.fermion_sites;
    s.dx = c.lattice_dx;
    s.boundary = bc;
    s.statistics = Statistics::fermion;
    out.push_back(free_fermion_spectrum_check(s, 1.0, 1.0));
    s.potential.assign(s.sites, 0.0);
    SplitMix64 rng(c.seed);
    for (double& v : s.potential) v = rng.uniform() * 2.0 - 1.0;
    out.push_back(with_operands(free_fermion_spectrum_check(s, 1.0, 1.0),
                                std::string(to_string(bc)) + " sites=" + std::to_string(s.sites) + " random V"));
    out.push_back(number_conservation(s, 1.0, 1.0));
  }
  {
    LatticeSpec s;
    s.sites = c.boson_sites;
    s.n_max = c.boson_n_max;
    s.dx = c.lattice_dx;
    s.statistics = Statistics::boson;
    s.boundary = Boundary::periodic;
    s.potential.assign(s.sites, 0.5);
    out.push_back(number_conservation(s, 1.0, 1.0));
  }
  return out;
}

inline double coefficient_mass(const symbolic::NCPolynomial& p) {
  double m = 0.0;
  for (const auto& [k, coeff] : p.terms()) m += std::abs(coeff.to_complex());
  return m;
}

inline Reports obstruction(const SuiteConfig&) {
  using namespace symbolic;
  Reports out;
  std::vector<CPolynomial> monomials;
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; a + b <= 2; ++b) monomials.push_back(CPolynomial::monomial(a, b));
  }
  for (const CPolynomial& f : monomials) {
    for (const CPolynomial& g : monomials) {
      const NCPolynomial d = dirac_discrepancy(f, g);
      out.push_back(ResidualReport::make("discrepancy_degree2", "(" + f.to_string() + ", " + g.to_string() + ")", 0,
                                         coefficient_mass(d), 0.0));
    }
  }
  const NCPolynomial golden = NCPolynomial::constant(ComplexRational(0, Rational(-3, 2)), 3);
  const NCPolynomial d = dirac_discrepancy(parse_classical("q^3"), parse_classical("p^3"));
  out.push_back(ResidualReport::make("groenewold_q3_p3", "(q^3, p^3) vs -(3/2) i hbar^3: " + d.to_string(), 0,
                                     coefficient_mass(d - golden), 0.0));
  const NCPolynomial c33 = nc_commutator(parse_nc("q^3"), parse_nc("p^3"));
  out.push_back(ResidualReport::make("normal_order_confluence", "[q^3,p^3] leftmost vs rightmost", 0,
                                     coefficient_mass(normal_order(parse_nc("q^3*p^3 - p^3*q^3"), RewriteStrategy::rightmost) - c33),
                                     0.0));
  return out;
}

}  // namespace suites

using SuiteFn = std::function<std::vector<ResidualReport>(const SuiteConfig&)>;

inline SuiteFn suite_function(const std::string& name) {
  if (name == "identities") return suites::identities;
  if (name == "reps") return suites::reps;
  if (name == "heisenberg1925") return suites::heisenberg1925;
  if (name == "constraints") return suites::constraints;
  if (name == "fields") return suites::fields;
  if (name == "obstruction") return suites::obstruction;
  throw ConfigError("unknown suite: " + name);
}

/// Run the configured suites (concurrently) and assemble a canonical bundle.
inline ReportBundle run_suite(const SuiteConfig& config) {
  validate(config);
  Stopwatch sw;
  std::vector<std::pair<std::string, std::future<std::vector<ResidualReport>>>> jobs;
  for (const std::string& name : config.suites) {
    SuiteFn fn = suite_function(name);
    jobs.emplace_back(name, std::async(std::launch::async, [fn, &config] { return fn(config); }));
  }
  ReportBundle bundle;
  bundle.config = config;
  for (auto& [name, job] : jobs) {
    for (ResidualReport& r : job.get()) {
      r.suite = name;
      // in a bundle an artifact passes when the predicted defect shows up
      if (r.artifact) r.pass = r.as_expected();
      if (!config.timing) r.runtime_ms = 0.0;
      bundle.reports.push_back(std::move(r));
    }
  }
  bundle.canonicalize();
  bundle.total_runtime_ms = config.timing ? sw.elapsed_ms() : 0.0;
  return bundle;
}

}  // namespace bracketlab::cli
