// ctsboson: Gutzwiller and BDMFT sweeps with Fock or coherent-tail truncation.
//
// Exit codes: 0 ok, 1 invalid input, 2 selftest failure, 3 boundary bracket failure.

#include "ctsboson/errors.hpp"
#include "ctsboson/records.hpp"
#include "ctsboson/selftest.hpp"
#include "ctsboson/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

using namespace ctsboson;

namespace {

struct Options {
  std::string solver = "gutzwiller";
  std::vector<double> mu{0.4};
  std::optional<double> j;
  double j_min = 0.0, j_max = 1.0, j_step = 0.02;
  std::vector<std::string> schemes{"fock:20"};
  int lb = 2;
  std::string alpha_scheme = "eaim";
  std::string out;
  int workers = 1;
  int repeats = 3;
  bool cold_start = false;
  int z = 6;
  double j_lo = 0.0, j_hi = 0.1, tol_j = 1e-4;
  bool inject_fault = false;

  // solver settings
  double gw_mixing = 0.7, gw_tol_phi = 1e-10;
  int gw_max_iter = 2000;
  double beta_fict = 40.0;
  int n_omega = 256;
  double mixing_delta = 0.5, mixing_phi = 0.5, tol_phi = 1e-8, tol_delta = 1e-6;
  int max_sc_iter = 300;
};

SweepSpec make_spec(const Options& o, Solver solver) {
  SweepSpec s;
  s.solver = solver;
  s.mu_list = o.mu;
  s.j_list = o.j ? std::vector<double>{*o.j} : j_grid(o.j_min, o.j_max, o.j_step);
  for (const auto& t : o.schemes) s.schemes.push_back(parse_scheme(t));
  s.z = o.z;
  s.workers = o.workers;
  s.repeats = o.repeats;
  s.warm_start = !o.cold_start;

  s.gutzwiller.mixing = o.gw_mixing;
  s.gutzwiller.tol_phi = o.gw_tol_phi;
  s.gutzwiller.max_iter = o.gw_max_iter;

  s.bdmft.l_b = o.lb;
  s.bdmft.alpha_scheme = bdmft::parse_alpha_scheme(o.alpha_scheme);
  s.bdmft.beta_fict = o.beta_fict;
  s.bdmft.n_omega = o.n_omega;
  s.bdmft.mixing_delta = o.mixing_delta;
  s.bdmft.mixing_phi = o.mixing_phi;
  s.bdmft.tol_phi = o.tol_phi;
  s.bdmft.tol_delta = o.tol_delta;
  s.bdmft.max_sc_iter = o.max_sc_iter;
  return s;
}

// stdout unless --out is given
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidInput("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int run_rows(const Options& o, Solver solver) {
  const auto rows = run_sweep(make_spec(o, solver));
  Output out(o.out);
  write_csv(out.stream(), rows);
  return 0;
}

int run_boundary(const Options& o) {
  const SweepSpec spec = make_spec(o, parse_solver(o.solver));
  std::vector<std::string> lines;
  for (const auto& scheme : spec.schemes) {
    for (double mu : spec.mu_list) {
      const auto r = detect_mott_boundary(spec, scheme, mu, o.j_lo, o.j_hi, o.tol_j);
      lines.push_back(o.solver + ',' + scheme.label() + ',' + format_real(mu) + ',' +
                      format_real(r.j_c) + ',' + format_real(r.j_lo) + ',' + format_real(r.j_hi) +
                      ',' + std::to_string(r.evaluations));
    }
  }
  Output out(o.out);
  out.stream() << "solver,scheme,mu_over_u,j_c,j_mott,j_superfluid,evaluations\n";
  for (const auto& l : lines) out.stream() << l << '\n';
  return 0;
}

int run_bench(const Options& o) {
  const auto table = bench(make_spec(o, parse_solver(o.solver)));
  Output out(o.out);
  write_bench_csv(out.stream(), table);
  for (std::size_t k = 0; k < table.labels.size(); ++k)
    if (static_cast<int>(k) != table.reference)
      std::fprintf(stderr, "median speedup %s/%s: %.3g\n", table.labels[table.reference].c_str(),
                   table.labels[k].c_str(), table.median_speedup(static_cast<int>(k)));
  return 0;
}

int run_selftest_cmd(const Options& o) {
  const auto report = run_selftest({o.inject_fault});
  print_report(std::cout, report);
  return report.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Hubbard Gutzwiller and BDMFT solvers with Fock or coherent-tail truncation"};
  app.set_config("--config", "", "key=value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--solver", o.solver, "gutzwiller or bdmft (sweep, boundary, bench)")
      ->check(CLI::IsMember({"gutzwiller", "bdmft"}));
  app.add_option("--mu", o.mu, "mu/U values (repeat or comma-separate)")->delimiter(',');
  app.add_option("--j", o.j, "single J/U point (overrides the J grid)");
  app.add_option("--j-min", o.j_min, "J/U grid start");
  app.add_option("--j-max", o.j_max, "J/U grid end (inclusive)");
  app.add_option("--j-step", o.j_step, "J/U grid step");
  app.add_option("--scheme", o.schemes, "fock:<N_c> or cts:<N_c> (repeat or comma-separate)")
      ->delimiter(',');
  app.add_option("--lb", o.lb, "BDMFT bath orbitals (1..4)");
  app.add_option("--alpha-scheme", o.alpha_scheme, "BDMFT alpha choice: eaim, etot or fixed:<v>");
  app.add_option("--out", o.out, "output CSV path (default stdout)");
  app.add_option("--workers", o.workers, "parallel (scheme, mu) chains");
  app.add_option("--repeats", o.repeats, "bench repetitions per point (>= 3)");
  app.add_flag("--cold-start", o.cold_start, "no warm start along J");
  app.add_option("--z", o.z, "coordination number");
  app.add_option("--j-lo", o.j_lo, "boundary bracket, Mott end");
  app.add_option("--j-hi", o.j_hi, "boundary bracket, superfluid end");
  app.add_option("--tol-j", o.tol_j, "boundary bisection tolerance");
  app.add_flag("--inject-fault", o.inject_fault, "selftest negative control");

  auto* tuning = "Solver settings";
  app.add_option("--gw-mixing", o.gw_mixing, "Gutzwiller phi mixing")->group(tuning);
  app.add_option("--gw-tol-phi", o.gw_tol_phi, "Gutzwiller phi tolerance")->group(tuning);
  app.add_option("--gw-max-iter", o.gw_max_iter, "Gutzwiller iteration cap")->group(tuning);
  app.add_option("--beta-fict", o.beta_fict, "fictitious inverse temperature of the fit grid")
      ->group(tuning);
  app.add_option("--n-omega", o.n_omega, "Matsubara points in the fit")->group(tuning);
  app.add_option("--mixing-delta", o.mixing_delta, "hybridization mixing")->group(tuning);
  app.add_option("--mixing-phi", o.mixing_phi, "condensate mixing")->group(tuning);
  app.add_option("--tol-phi", o.tol_phi, "BDMFT phi_C tolerance")->group(tuning);
  app.add_option("--tol-delta", o.tol_delta, "BDMFT relative hybridization tolerance")->group(tuning);
  app.add_option("--max-sc-iter", o.max_sc_iter, "BDMFT iteration cap")->group(tuning);

  auto* gutz = app.add_subcommand("gutzwiller", "Gutzwiller runs over mu x J x schemes (CSV)");
  auto* dmft = app.add_subcommand("bdmft", "BDMFT runs over mu x J x schemes (CSV)");
  auto* sweep = app.add_subcommand("sweep", "sweep with --solver (CSV)");
  auto* boundary = app.add_subcommand("boundary", "Mott boundary by bisection in J");
  auto* benchmark = app.add_subcommand("bench", "timing table with speedups vs the largest Fock basis");
  auto* self = app.add_subcommand("selftest", "built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gutz) return run_rows(o, Solver::Gutzwiller);
    if (*dmft) return run_rows(o, Solver::Bdmft);
    if (*sweep) return run_rows(o, parse_solver(o.solver));
    if (*boundary) return run_boundary(o);
    if (*benchmark) return run_bench(o);
    if (*self) return run_selftest_cmd(o);
  } catch (const BoundaryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
