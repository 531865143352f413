#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bracketlab/cli/runner.hpp"

namespace bl = bracketlab;
namespace cli = bracketlab::cli;

namespace {

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  cli::write_file(path, text);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cli::IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_summary(const cli::ReportBundle& b) {
  for (const auto& [suite, s] : b.per_suite()) {
    std::cerr << suite << ": " << s.passed << "/" << s.total << " passed";
    if (s.artifacts) std::cerr << " (" << s.artifacts << " artifact)";
    std::cerr << "\n";
  }
  for (const bl::ResidualReport* r : b.failures()) {
    std::cerr << "FAIL " << r->suite << "/" << r->identity_id << " dim=" << r->dim << " seed=" << r->seed
              << " residual=" << cli::detail::format_double(r->residual)
              << " tolerance=" << cli::detail::format_double(r->tolerance) << " [" << r->operands << "]\n";
  }
  std::cerr << (b.overall_pass() ? "overall: PASS" : "overall: FAIL") << "\n";
}

struct VerifyArgs {
  std::string config;
  std::vector<std::string> suites;
  std::string dims;
  int trials = 0;
  std::string seed;
  double tol = -1.0;
  std::string out;
  std::string format;
  bool no_timing = false;
};

cli::SuiteConfig resolve_config(const VerifyArgs& a) {
  cli::SuiteConfig c = a.config.empty() ? cli::SuiteConfig{} : cli::load_config(a.config);
  if (!a.suites.empty()) {
    c.suites.clear();
    c.only.clear();
    const auto& ids = cli::identity_ids();
    for (const std::string& s : a.suites) {
      if (std::find(ids.begin(), ids.end(), s) != ids.end()) {
        c.only.push_back(s);
        if (!c.wants("identities")) c.suites.push_back("identities");
      } else if (!c.wants(s)) {
        c.suites.push_back(s);
      }
    }
  }
  if (!a.dims.empty()) cli::parse_dims(a.dims, c.dim_min, c.dim_max);
  if (a.trials != 0) c.trials = a.trials;
  if (!a.seed.empty()) c.seed = cli::detail::parse_seed(a.seed);
  if (a.tol >= 0.0) {
    if (c.only.empty()) c.tolerances["default"] = a.tol;
    for (const std::string& id : c.only) c.tolerances[id] = a.tol;
  }
  if (!a.out.empty()) c.out = a.out;
  if (!a.format.empty()) c.format = a.format;
  if (a.no_timing) c.timing = false;
  cli::validate(c);
  return c;
}

int run_verify(const VerifyArgs& a) {
  const cli::SuiteConfig c = resolve_config(a);
  const cli::ReportBundle b = cli::run_suite(c);
  write_or_print(c.out, cli::render(b, c.format));
  print_summary(b);
  return b.overall_pass() ? 0 : 1;
}

bl::AnharmonicKind parse_kind(const std::string& s) {
  if (s == "cubic") return bl::AnharmonicKind::cubic;
  if (s == "quartic") return bl::AnharmonicKind::quartic;
  throw cli::ConfigError("kind must be cubic or quartic");
}

int run_reconstruct(int dim, double g, const std::string& kind, int levels, const std::string& out) {
  const bl::AnharmonicSpec spec = bl::AnharmonicSpec::make(dim, g, parse_kind(kind));
  if (levels < 1 || levels > dim) throw cli::ConfigError("levels must lie in 1..dim");
  const bl::TransitionTable t = bl::transition_table(bl::build_anharmonic(spec), spec.base.Q, levels);
  std::ostringstream o;
  o << "n,m,E_n,omega_nm_re,x_nm_re,x_nm_im\n";
  for (int n = 0; n < t.k; ++n) {
    for (int m = 0; m < t.k; ++m) {
      o << n << ',' << m << ',' << cli::detail::format_double(t.energies[n]) << ','
        << cli::detail::format_double(t.omega(n, m)) << ',' << cli::detail::format_double(t.x(n, m).real()) << ','
        << cli::detail::format_double(t.x(n, m).imag()) << "\n";
    }
  }
  write_or_print(out, o.str());
  const bl::ResidualReport ritz = bl::ritz_check(t);
  std::cerr << "ritz residual " << cli::detail::format_double(ritz.residual) << " (tolerance "
            << cli::detail::format_double(ritz.tolerance) << ")\n";
  return ritz.pass ? 0 : 1;
}

int run_obstruction(const std::string& f, const std::string& g) {
  namespace sym = bl::symbolic;
  const sym::NCPolynomial d = sym::dirac_discrepancy(sym::parse_classical(f), sym::parse_classical(g));
  std::cout << "Q(f)=" << sym::weyl_quantize(sym::parse_classical(f)).to_string() << "\n"
            << "Q(g)=" << sym::weyl_quantize(sym::parse_classical(g)).to_string() << "\n"
            << "discrepancy=" << d.to_string() << "\n";
  return 0;
}

std::vector<bl::FHypothesisCoefficients> coefficient_grid(const cli::SuiteConfig& c) {
  static const char* names[] = {"A", "B", "C", "D", "A1", "B1", "C1", "D1"};
  std::vector<bl::FHypothesisCoefficients> grid{bl::FHypothesisCoefficients{}};
  for (int k = 0; k < 8; ++k) {
    const auto it = c.grids.find(std::string("f.") + names[k]);
    if (it == c.grids.end() || it->second.empty()) continue;
    std::vector<bl::FHypothesisCoefficients> next;
    for (const bl::FHypothesisCoefficients& base : grid) {
      for (double v : it->second) {
        bl::FHypothesisCoefficients x = base;
        double* fields[] = {&x.A, &x.B, &x.C, &x.D, &x.A1, &x.B1, &x.C1, &x.D1};
        *fields[k] = v;
        next.push_back(x);
      }
    }
    grid = std::move(next);
  }
  return grid;
}

int run_constraints(const std::string& config, const std::vector<std::string>& grid_flags, int dim, double lambda,
                    double t_max, const std::string& out) {
  cli::SuiteConfig c = config.empty() ? cli::SuiteConfig{} : cli::load_config(config);
  for (const std::string& flag : grid_flags) {
    const auto eq = flag.find('=');
    if (eq == std::string::npos) throw cli::ConfigError("--grid expects NAME=v1,v2,...");
    cli::apply_setting(c, "grids", "f." + cli::detail::trim(flag.substr(0, eq)), flag.substr(eq + 1));
  }
  if (dim < 8 || dim > 128) throw cli::ConfigError("dim must lie in 8..128");
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(t_max * i / 10.0);
  const bl::Representation rep = bl::truncated_ladder(dim);
  const auto rows = bl::f_hypothesis_sweep(coefficient_grid(c), rep, lambda, times);
  std::ostringstream o;
  o << "A,B,C,D,A1,B1,C1,D1,class_residual,dynamics_deviation\n";
  using cli::detail::format_double;
  for (const bl::SweepRow& r : rows) {
    const auto& k = r.coefficients;
    for (double v : {k.A, k.B, k.C, k.D, k.A1, k.B1, k.C1, k.D1}) o << format_double(v) << ',';
    o << format_double(r.class_residual) << ',' << format_double(r.dynamics_deviation) << "\n";
  }
  write_or_print(out, o.str());
  return 0;
}

int run_fields(int sites, const std::string& statistics, const std::string& boundary, int n_max, double dx,
               double mass, const std::string& out) {
  bl::LatticeSpec s;
  s.sites = sites;
  s.n_max = n_max;
  s.dx = dx;
  if (statistics == "boson") s.statistics = bl::Statistics::boson;
  else if (statistics == "fermion") s.statistics = bl::Statistics::fermion;
  else throw cli::ConfigError("statistics must be boson or fermion");
  if (boundary == "open") s.boundary = bl::Boundary::open;
  else if (boundary == "periodic") s.boundary = bl::Boundary::periodic;
  else throw cli::ConfigError("boundary must be open or periodic");
  try {
    s.validate();
  } catch (const bl::InvalidArgument& e) {
    throw cli::ConfigError(e.what());
  }
  const std::vector<double> spectrum = bl::sorted_spectrum(bl::schrodinger_field_hamiltonian(s, mass, 1.0));
  std::ostringstream o;
  o << "index,eigenvalue\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i) o << i << ',' << cli::detail::format_double(spectrum[i]) << "\n";
  write_or_print(out, o.str());
  return 0;
}

int run_report(const std::string& in, const std::string& format, const std::string& out) {
  cli::Json j;
  try {
    j = cli::Json::parse(read_file(in));
  } catch (const cli::Json::parse_error& e) {
    throw cli::ConfigError(std::string("report input: ") + e.what());
  }
  const cli::ReportBundle b = cli::bundle_from_json(j);
  write_or_print(out, cli::render(b, format));
  return b.overall_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bracketlab: operator identities, truncated representations and matrix-mechanics checks"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run verification suites and emit a report");
  verify->add_option("--config", va.config, "key-value config file");
  verify->add_option("--suite", va.suites, "suite name or identity id (repeatable, comma separated)")->delimiter(',');
  verify->add_option("--dims", va.dims, "operand dimension range lo..hi");
  verify->add_option("--trials", va.trials, "random operand sets per identity");
  verify->add_option("--seed", va.seed, "64-bit seed");
  verify->add_option("--tol", va.tol, "tolerance for the selected identities");
  verify->add_option("--out", va.out, "report path (stdout when absent)");
  verify->add_option("--format", va.format, "json, csv or markdown");
  verify->add_flag("--no-timing", va.no_timing, "zero all runtime fields");

  int r_dim = 64;
  double r_g = 0.01;
  std::string r_kind = "cubic";
  int r_levels = 10;
  std::string r_out;
  auto* recon = app.add_subcommand("reconstruct1925", "transition table of an anharmonic oscillator as CSV");
  recon->add_option("--dim", r_dim, "truncation dimension");
  recon->add_option("--g", r_g, "anharmonic coupling");
  recon->add_option("--kind", r_kind, "cubic or quartic");
  recon->add_option("--levels", r_levels, "number of levels tabulated");
  recon->add_option("--out", r_out, "CSV path (stdout when absent)");

  std::string o_f;
  std::string o_g;
  auto* obs = app.add_subcommand("obstruction", "Weyl-quantization discrepancy of two classical polynomials");
  obs->add_option("--f", o_f, "first polynomial in q, p")->required();
  obs->add_option("--g", o_g, "second polynomial in q, p")->required();

  std::string c_config;
  std::vector<std::string> c_grid;
  int c_dim = 32;
  double c_lambda = 0.5;
  double c_tmax = 10.0;
  std::string c_out;
  auto* cons = app.add_subcommand("constraints", "polynomial constraint coefficient sweep as CSV");
  cons->add_option("--config", c_config, "config file with [grids] f.<name> entries");
  cons->add_option("--grid", c_grid, "NAME=v1,v2,... for NAME in A,B,C,D,A1,B1,C1,D1 (repeatable)");
  cons->add_option("--dim", c_dim, "ladder dimension");
  cons->add_option("--lambda", c_lambda, "multiplier");
  cons->add_option("--t-max", c_tmax, "end of the time grid");
  cons->add_option("--out", c_out, "CSV path (stdout when absent)");

  int f_sites = 4;
  std::string f_stats = "fermion";
  std::string f_boundary = "open";
  int f_nmax = 2;
  double f_dx = 1.0;
  double f_mass = 1.0;
  std::string f_out;
  auto* fields = app.add_subcommand("fields", "many-body lattice spectrum as CSV");
  fields->add_option("--sites", f_sites, "lattice sites");
  fields->add_option("--statistics", f_stats, "boson or fermion");
  fields->add_option("--boundary", f_boundary, "open or periodic");
  fields->add_option("--n-max", f_nmax, "boson occupation cutoff");
  fields->add_option("--dx", f_dx, "lattice spacing");
  fields->add_option("--mass", f_mass, "particle mass");
  fields->add_option("--out", f_out, "CSV path (stdout when absent)");

  std::string p_in;
  std::string p_format = "markdown";
  std::string p_out;
  auto* report = app.add_subcommand("report", "re-render a JSON report");
  report->add_option("input", p_in, "JSON report")->required();
  report->add_option("--format", p_format, "json, csv or markdown");
  report->add_option("--out", p_out, "output path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return run_verify(va);
    if (*recon) return run_reconstruct(r_dim, r_g, r_kind, r_levels, r_out);
    if (*obs) return run_obstruction(o_f, o_g);
    if (*cons) return run_constraints(c_config, c_grid, c_dim, c_lambda, c_tmax, c_out);
    if (*fields) return run_fields(f_sites, f_stats, f_boundary, f_nmax, f_dx, f_mass, f_out);
    if (*report) return run_report(p_in, p_format, p_out);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cli::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    // bad operand values and unparsable expressions
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
