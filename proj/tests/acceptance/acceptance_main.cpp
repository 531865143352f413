// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-bracketlab-binary>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "bracketlab/cli/config.hpp"
#include "bracketlab/constraint_lab.hpp"
#include "bracketlab/field_lattice.hpp"
#include "bracketlab/heisenberg1925.hpp"
#include "bracketlab/identity_lab.hpp"
#include "bracketlab/reps.hpp"
#include "bracketlab/symbolic/algebra.hpp"
#include "bracketlab/symbolic/parser.hpp"

using namespace bracketlab;
using bracketlab::cli::detail::format_double;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome identities() {
  Outcome o;
  const auto t0 = Clock::now();
  int checked = 0;
  double worst_ratio = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int dim = 2 + t % 15;
    const std::uint64_t seed = derive_seed(20240615, t);
    const Operator a = random_hermitian(dim, derive_seed(seed, 0));
    const Operator b = random_hermitian(dim, derive_seed(seed, 1));
    const Operator c = random_hermitian(dim, derive_seed(seed, 2));
    const Operator d = random_hermitian(dim, derive_seed(seed, 3));
    const QuantizationConstants k = QuantizationConstants::with_hbar(0.3 + 0.2 * (t % 5));
    const std::vector<ResidualReport> reports{
        jacobi_residual(a, b, c),
        graded_jacobi_residual(a, b, c),
        dirac_consistency_residual(a, b, c, d, DiracMode::four_op, k),
        dirac_consistency_residual(a, b, c, d, DiracMode::three_op, k),
        dirac_consistency_residual(a, b, c, d, DiracMode::poisson_only, k),
        lagrange_condition_residual(a, b, c, k)};
    for (const ResidualReport& r : reports) {
      ++checked;
      worst_ratio = std::max(worst_ratio, r.residual / r.tolerance);
      o.require(r.pass, r.identity_id + " dim=" + std::to_string(dim));
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "took " + format_double(secs) + " s");
  o.detail = std::to_string(checked) + " checks, worst residual/tol " + format_double(worst_ratio) + ", " +
             format_double(secs) + " s" + (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

Outcome trace_anomaly() {
  Outcome o;
  double worst_corner = 0.0;
  for (double hbar : {1.0, 0.6}) {
    const QuantizationConstants k = QuantizationConstants::with_hbar(hbar);
    for (int dim = 1; dim <= 16; ++dim) {
      const TraceAnomalyCertificate cert = trace_anomaly_certificate(dim, k, 16, 99 + dim);
      o.require(cert.report.pass, "sampled trace dim=" + std::to_string(dim));
      o.require(std::abs(cert.identity_trace - hbar * dim) <= 1e-12 * hbar * dim,
                "identity trace dim=" + std::to_string(dim));
      o.require(cert.infeasible, "verdict dim=" + std::to_string(dim));
      if (dim >= 2) {
        const double err = std::abs(cert.ladder_corner - Complex(0.0, -hbar * (dim - 1)));
        worst_corner = std::max(worst_corner, err);
        o.require(err <= 1e-12, "corner dim=" + std::to_string(dim));
      }
    }
  }
  o.detail = "dims 1-16 at hbar 1 and 0.6, worst corner error " + format_double(worst_corner) +
             (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

Outcome joint_residual_bound() {
  Outcome o;
  const QuantizationConstants k = QuantizationConstants::with_hbar(1.0);
  std::string minima;
  for (int dim = 2; dim <= 6; ++dim) {
    const MixingResult m = mixing_feasibility_bound(dim, 50, k, 7000 + dim);
    const double floor = k.hbar * k.hbar * dim * (1.0 - 1e-6);
    minima += (minima.empty() ? "" : ",") + format_double(m.best);
    o.require(m.best >= floor, "dim=" + std::to_string(dim) + " best=" + format_double(m.best));
  }
  const Representation choy = pauli_choy_pair(1.0);
  const JointResidual j = joint_residual(choy.Q, choy.P, 1.0);
  o.require(j.anticommutator_term == 0.0, "Choy anticommutator term " + format_double(j.anticommutator_term));
  o.require(j.commutator_term > 0.0, "Choy commutator term not positive");
  o.detail = "minima [" + minima + "], Choy anticommutator " + format_double(j.anticommutator_term) +
             " commutator " + format_double(j.commutator_term) + (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

Outcome weyl() {
  Outcome o;
  double worst = 0.0;
  for (int dim = 2; dim <= 64; ++dim) {
    const ResidualReport r = weyl_relation_residual(clock_shift(dim), WeylParams::discrete(dim), 1e-12);
    worst = std::max(worst, r.residual);
    o.require(r.pass, "clock-shift dim=" + std::to_string(dim));
  }
  const ResidualReport lad = weyl_relation_residual(truncated_ladder(64), WeylParams::continuous(0.1, 0.1, 1.0), 1e-6, 8);
  o.require(lad.pass, "ladder residual " + format_double(lad.residual));
  o.detail = "clock-shift worst " + format_double(worst) + ", ladder d=64 " + format_double(lad.residual) +
             (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

Outcome groenewold() {
  using namespace symbolic;
  Outcome o;
  int pairs = 0;
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; a + b <= 2; ++b) {
      for (int c = 0; c <= 2; ++c) {
        for (int d = 0; c + d <= 2; ++d) {
          ++pairs;
          const CPolynomial f = CPolynomial::monomial(a, b);
          const CPolynomial g = CPolynomial::monomial(c, d);
          o.require(dirac_discrepancy(f, g).is_zero(), "(" + f.to_string() + ", " + g.to_string() + ")");
        }
      }
    }
  }
  const NCPolynomial d = dirac_discrepancy(parse_classical("q^3"), parse_classical("p^3"));
  const NCPolynomial golden = NCPolynomial::constant(ComplexRational(0, Rational(-3, 2)), 3);
  o.require(d == golden, "(q^3, p^3) gave " + d.to_string());
  o.detail = std::to_string(pairs) + " degree<=2 pairs zero, (q^3, p^3) -> " + d.to_string() +
             (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

Outcome reconstruction() {
  Outcome o;
  const int dim = 64;
  std::vector<TransitionTable> tables;
  for (const auto& [g, kind] : std::vector<std::pair<double, AnharmonicKind>>{
           {0.0, AnharmonicKind::cubic}, {0.01, AnharmonicKind::cubic}, {0.1, AnharmonicKind::quartic}}) {
    const AnharmonicSpec s = AnharmonicSpec::make(dim, g, kind);
    tables.push_back(transition_table(build_anharmonic(s), s.base.Q, 10));
  }
  for (const TransitionTable& t : tables) {
    const ResidualReport r = ritz_check(t);
    o.require(r.residual <= 1e-12 * t.max_abs_energy(), "Ritz residual " + format_double(r.residual));
  }
  const ResidualReport spacing = spacing_check(tables[0], 1.0, 1e-10);
  o.require(spacing.pass, "harmonic spacing " + format_double(spacing.residual));

  const AnharmonicSpec harmonic = AnharmonicSpec::make(dim, 0.0, AnharmonicKind::cubic);
  const TransitionTable full = transition_table(build_anharmonic(harmonic), harmonic.base.Q, dim);
  double trk = 0.0;
  for (int n = 0; n <= 5; ++n) {
    const ResidualReport r = thomas_kuhn_check(full, n, 1.0, 1.0, 1e-8);
    trk = std::max(trk, r.residual);
    o.require(r.pass, "TRK n=" + std::to_string(n));
  }
  const std::vector<double> gs{1e-3, 2e-3, 4e-3};
  std::string slopes;
  for (int n = 0; n <= 3; ++n) {
    const double s = perturbation_error_slope(AnharmonicKind::cubic, n, gs, dim);
    slopes += (slopes.empty() ? "" : ",") + format_double(std::round(s * 1e4) / 1e4);
    o.require(s >= 2.7 && s <= 3.3, "cubic order-2 slope n=" + std::to_string(n) + " is " +
                                        format_double(std::round(s * 1e4) / 1e4) + ", outside [2.7, 3.3]");
  }
  o.detail = "Ritz/spacing/TRK(max " + format_double(trk) + ") checked, cubic slopes [" + slopes + "]" +
             (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

Outcome ehrenfest() {
  Outcome o;
  const Representation lad = truncated_ladder(64);
  double worst = 0.0;
  for (const char* v : {"0", "q^2/2", "q/3", "q^2/2 + q^3/50", "q^4/10", "q^2/2 - q^3/20 + q^4/10", "q^4 - q"}) {
    const ResidualReport r = ehrenfest_residual(lad, symbolic::parse_classical(v), 1e-10);
    worst = std::max(worst, r.residual);
    o.require(r.pass, std::string("V=") + v + " residual " + format_double(r.residual));
  }
  // not part of the bound: round-off grows with the coefficients
  const double stress = ehrenfest_residual(lad, symbolic::parse_classical("2*q^4 - q")).residual;
  o.detail = "worst interior residual " + format_double(worst) + " (info: V=2q^4-q gives " + format_double(stress) +
             ")" + (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

Outcome constraint_dynamics() {
  Outcome o;
  const double hbar = 1.0;
  const Representation r = truncated_ladder(32);
  const Operator chi = commutator(r.Q, r.P);
  const ConstraintSystem sys{r.aux_op("H0"),
                             {ConstraintTerm::scalar(Complex(0.0, 0.7), commutator(r.P, r.Q) + Operator::identity(32) * kI),
                              ConstraintTerm::scalar(0.3, chi * chi)},
                             QuantizationConstants::with_hbar(hbar)};
  o.require(heisenberg_class_check(sys).pass, "system not in the Heisenberg class");
  const Operator ht = total_hamiltonian(sys);
  double dyn = 0.0;
  for (const Operator& g : {r.Q, r.P, r.Q * r.P}) {
    for (int i = 0; i <= 50; ++i) {
      const double t = 10.0 * i / 50.0;
      dyn = std::max(dyn, (evolve(g, ht, t, hbar) - evolve(g, r.aux_op("H0"), t, hbar)).interior(2).norm());
    }
  }
  o.require(dyn <= 1e-10, "evolution deviation " + format_double(dyn));

  const Operator raw = random_hermitian(6, 31);
  const Operator h = raw * (1.0 / raw.norm());
  const GhostDefect commuting =
      ghost_defect(h, h * h, h * h * h * 0.2 + h, Operator::identity(6) * 0.25, Operator::identity(6) * -0.6, hbar);
  o.require(commuting.direct.norm() <= 1e-12, "commuting defect " + format_double(commuting.direct.norm()));

  const Representation l20 = truncated_ladder(20);
  const GhostDefect squares = ghost_defect(l20.Q, l20.Q * l20.Q, l20.P * l20.P, Operator::identity(20) * 0.25,
                                           Operator::identity(20) * -0.6, hbar);
  const double ratio = squares.direct.interior(4).norm() / l20.Q.interior(4).norm();
  o.require(ratio >= 0.1, "Q^2/P^2 defect ratio " + format_double(ratio));

  double agreement = 0.0;
  for (int s = 0; s < 100; ++s) {
    const int n = 2 + s % 5;
    const std::uint64_t seed = derive_seed(77, s);
    Operator g = random_hermitian(n, derive_seed(seed, 0)) + random_hermitian(n, derive_seed(seed, 1)) * kI;
    Operator fi = random_hermitian(n, derive_seed(seed, 2));
    Operator fj = random_hermitian(n, derive_seed(seed, 3));
    Operator eps = Operator::identity(n) * 0.4;
    Operator gam = Operator::identity(n) * 1.3;
    if (s % 2) {
      g = kron(Operator::identity(2), g);
      fi = kron(Operator::identity(2), fi);
      fj = kron(Operator::identity(2), fj);
      eps = kron(pauli_x() * 0.7 + pauli_z() * 0.1, Operator::identity(n));
      gam = kron(pauli_y() * 0.5, Operator::identity(n));
    }
    agreement = std::max(agreement, ghost_defect(g, fi, fj, eps, gam, 0.5 + 0.1 * (s % 6)).agreement);
  }
  o.require(agreement <= 1e-10, "two-path agreement " + format_double(agreement));
  o.detail = "evolution deviation " + format_double(dyn) + ", commuting defect " +
             format_double(commuting.direct.norm()) + ", Q^2/P^2 ratio " + format_double(ratio) +
             ", two-path worst " + format_double(agreement) + (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

Outcome field_lattices() {
  Outcome o;
  LatticeSpec f;
  f.sites = 6;
  f.statistics = Statistics::fermion;
  const ResidualReport car = fermion_car_residual(f);
  o.require(car.pass, "CAR " + format_double(car.residual));
  double spectrum = 0.0;
  double conservation = 0.0;
  for (Boundary bc : {Boundary::open, Boundary::periodic}) {
    f.boundary = bc;
    f.potential.clear();
    for (int pass = 0; pass < 2; ++pass) {
      const ResidualReport s = free_fermion_spectrum_check(f, 1.0, 1.0, 1e-9);
      const ResidualReport n = number_conservation(f, 1.0, 1.0, 1e-12);
      spectrum = std::max(spectrum, s.residual);
      conservation = std::max(conservation, n.residual);
      o.require(s.pass, std::string("spectrum ") + to_string(bc));
      o.require(n.pass, std::string("[H,N] fermion ") + to_string(bc));
      f.potential = {0.3, -0.2, 0.5, 0.0, -0.4, 0.1};
    }
  }
  double ccr = 0.0;
  for (double dx : {1.0, 0.5, 0.1}) {
    for (int sites = 1; sites <= 3; ++sites) {
      LatticeSpec b;
      b.sites = sites;
      b.n_max = 3;
      b.dx = dx;
      b.statistics = Statistics::boson;
      const ResidualReport r = boson_ccr_residual(b);
      ccr = std::max(ccr, r.residual);
      o.require(r.pass, "boson CCR sites=" + std::to_string(sites) + " dx=" + format_double(dx));
    }
  }
  double dx_stress = 0.0;
  for (int sites = 1; sites <= 3; ++sites) {
    LatticeSpec b;
    b.sites = sites;
    b.n_max = 3;
    b.statistics = Statistics::boson;
    b.boundary = Boundary::periodic;
    b.potential.assign(sites, 0.0);
    for (int i = 0; i < sites; ++i) b.potential[i] = 0.25 * (i + 1) - 0.4;
    const ResidualReport n = number_conservation(b, 1.0, 1.0, 1e-12);
    conservation = std::max(conservation, n.residual);
    o.require(n.pass, "[H,N] boson sites=" + std::to_string(sites));
    b.dx = 0.1;
    dx_stress = std::max(dx_stress, number_conservation(b, 1.0, 1.0, 1e-12).residual);
  }
  o.detail = "CAR " + format_double(car.residual) + ", spectrum " + format_double(spectrum) + ", boson CCR " +
             format_double(ccr) + " (dx 1, 0.5, 0.1), [H,N] " + format_double(conservation) +
             " (info: boson dx=0.1 gives " + format_double(dx_stress) + ")" +
             (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome full_suite(const std::string& tool) {
  Outcome o;
  if (tool.empty()) {
    o.require(false, "no tool path given");
    return o;
  }
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "bracketlab_acceptance";
  std::filesystem::create_directories(dir);
  const std::filesystem::path out = dir / "report.json";
  const std::string cmd = "\"" + tool + "\" verify --seed 42 --no-timing --out \"" + out.string() + "\" 2>/dev/null";
  std::string first;
  double slowest = 0.0;
  for (int run = 0; run < 2; ++run) {
    const auto t0 = Clock::now();
    const int status = std::system(cmd.c_str());
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.require(code == 0, "run " + std::to_string(run + 1) + " exit code " + std::to_string(code));
    o.require(secs <= 60.0, "run took " + format_double(secs) + " s");
    const std::string text = slurp(out);
    if (run == 0) first = text;
    else o.require(!text.empty() && text == first, "reports differ between runs");
  }
  o.detail = "slowest run " + format_double(std::round(slowest * 100) / 100) + " s, " + std::to_string(first.size()) +
             " report bytes identical" + (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string tool = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"identity suites", identities},
      {"trace anomaly", trace_anomaly},
      {"joint residual bound", joint_residual_bound},
      {"Weyl relations", weyl},
      {"quantization obstruction", groenewold},
      {"1925 reconstruction", reconstruction},
      {"Ehrenfest residual", ehrenfest},
      {"constraint dynamics", constraint_dynamics},
      {"field lattices", field_lattices},
      {"full default suite", [&] { return full_suite(tool); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << " - " << o.detail
              << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
