#include "ctsboson/selftest.hpp"

#include "ctsboson/bdmft.hpp"
#include "ctsboson/cts_basis.hpp"
#include "ctsboson/impurity_ed.hpp"
#include "ctsboson/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ctsboson {

bool SelftestReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

void print_report(std::ostream& out, const SelftestReport& report) {
  for (const auto& c : report.checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
}

namespace {

constexpr double kAlphas[] = {0.1, 0.5, 1.0, 2.0, 4.0};

void add(SelftestReport& rep, std::string name, double worst, double tol) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst %.3g (tol %.3g)", worst, tol);
  rep.checks.push_back({std::move(name), std::isfinite(worst) && worst <= tol, buf});
}

double scaled_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& ref) {
  return oracles::max_abs_diff(a, ref) / std::max(1.0, ref.cwiseAbs().maxCoeff());
}

void cts_checks(SelftestReport& rep, const SelftestOptions& opt) {
  double closed = 0.0, ortho = 0.0, leak = 0.0, bdag = 0.0;
  for (double a : kAlphas) {
    for (int nc = 2; nc <= 12; ++nc) {
      const auto scheme = TruncationScheme::cts(nc, a);
      OperatorSet ops = build_operators(scheme);
      const auto ref = oracles::project(a, nc);
      const auto mom = cts_moments(a, nc);
      closed = std::max({closed, scaled_diff(ops.b, ref.b), scaled_diff(ops.n, ref.n),
                         scaled_diff(ops.nn, ref.nn),
                         std::abs(ops.norm_const - ref.norm_const) / ref.norm_const,
                         std::abs(mom.n_mean - ref.n(nc, nc)) / std::max(1.0, ref.n(nc, nc)),
                         std::abs(mom.nn_mean - ref.nn(nc, nc)) / std::max(1.0, ref.nn(nc, nc))});
      ortho = std::max(ortho, oracles::max_abs_diff(ref.gram, Eigen::MatrixXd::Identity(nc + 1, nc + 1)));

      if (opt.inject_fault) {
        ops.b(nc - 1, nc) *= 1.01;
        ops.b_dag = ops.b.transpose();
      }
      leak = std::max(leak, b_leakage_residual(ops, scheme) / std::max(1.0, ops.n(nc, nc)));

      // sum_k <k|b^dag|alpha>^2 <= <alpha|b b^dag|alpha> = n + 1, strictly for alpha > 0
      const double kept = ops.b_dag.col(nc).squaredNorm();
      const double full = ops.n(nc, nc) + 1.0;
      if (!(kept < full)) bdag += 1.0;
    }
  }
  add(rep, "tail-state closed forms vs series", closed, 1e-12);
  add(rep, "tail-state basis orthonormality", ortho, 1e-12);
  add(rep, "b leakage", leak, 1e-12);
  add(rep, "b-dagger projection inequality (violations)", bdag, 0.0);
}

impurity::AndersonParams atomic_params() {
  impurity::AndersonParams p;
  p.model = {0.0, 0.4, 6};
  p.eps = {1.0, 2.0};
  p.v = {0.0, 0.0};
  p.w = {0.0, 0.0};
  return p;
}

impurity::AndersonParams coupled_params() {
  impurity::AndersonParams p;
  p.model = {0.05, 0.7, 6};
  p.phi_c = 0.4;
  p.eps = {0.3, 1.1};
  p.v = {0.2, -0.15};
  p.w = {0.07, 0.03};
  return p;
}

void lehmann_checks(SelftestReport& rep) {
  const impurity::MatsubaraGrid grid;

  const auto fock6 = TruncationScheme::fock(6);
  const auto atom = atomic_params();
  const auto sa = impurity::solve(atom, fock6);
  const auto ga = impurity::lehmann_green(sa.eig, impurity::lift(build_operators(fock6), 2),
                                          sa.result.b_signed, grid);
  double poles = 0.0;
  for (std::size_t k = 0; k < ga.omegas.size(); ++k) {
    const std::complex<double> iw(0.0, ga.omegas[k]);
    poles = std::max({poles, std::abs(ga.g11[k] - (2.0 / (iw - 0.6) - 1.0 / (iw + 0.4))),
                      std::abs(ga.g12[k])});
  }
  add(rep, "atomic Lehmann poles", poles, 1e-12);

  const auto fock12 = TruncationScheme::fock(12);
  const auto p = coupled_params();
  const auto space = impurity::lift(build_operators(fock12), p.l_b());
  const auto sol = impurity::solve(p, fock12);
  const Eigen::VectorXd g0 = sol.eig.vectors.col(0);
  const Eigen::VectorXd up = space.b0.transpose() * g0 - sol.result.b_signed * g0;
  const Eigen::VectorXd down = space.b0 * g0 - sol.result.b_signed * g0;
  const double complete =
      std::max(std::abs((sol.eig.vectors.transpose() * up).squaredNorm() - up.squaredNorm()),
               std::abs((sol.eig.vectors.transpose() * down).squaredNorm() - down.squaredNorm()));
  add(rep, "Lehmann completeness", complete, 1e-10);

  const auto gc = impurity::lehmann_green(sol.eig, space, sol.result.b_signed, grid);
  const std::complex<double> iw_a(0.0, ga.omegas.back()), iw_c(0.0, gc.omegas.back());
  const double rule = std::max(std::abs((iw_a * ga.g11.back()).real() - 1.0),
                               std::abs((iw_c * gc.g11.back()).real() -
                                        (up.squaredNorm() - down.squaredNorm())));
  add(rep, "Lehmann sum rule at the largest frequency", rule, 0.02);

  impurity::AndersonParams weak = atom;
  weak.eps = {0.5};
  weak.v = {0.05};
  weak.w = {0.0};
  const double e = impurity::ground_energy(weak, fock6);
  const double shift = oracles::second_order_shift(1.0, 0.4, 1, 0.5, 0.05, 0.0);
  add(rep, "second-order perturbation theory", std::abs(e - (-0.4 + shift)) / std::abs(shift), 0.02);
}

void hybridization_checks(SelftestReport& rep) {
  const impurity::MatsubaraGrid grid;

  impurity::AndersonParams p;
  p.model = {0.0, -0.5, 6, 0.0};
  p.eps = {0.8};
  p.v = {0.3};
  p.w = {0.0};
  const auto fock12 = TruncationScheme::fock(12);
  const auto sol = impurity::solve(p, fock12);
  const auto g = impurity::lehmann_green(sol.eig, impurity::lift(build_operators(fock12), 1),
                                         sol.result.b_signed, grid);
  const auto delta = bdmft::hybridization_from_bath(p, grid);
  double two_site = 0.0;
  for (std::size_t k = 0; k < g.omegas.size(); ++k) {
    const std::complex<double> iw(0.0, g.omegas[k]);
    const auto ref = 1.0 / (iw + p.model.mu_over_u - delta.g11[k]);
    two_site = std::max({two_site, std::abs(g.g11[k] - ref) / std::abs(ref),
                         std::abs(g.g11[k] - oracles::two_site_green(g.omegas[k], 0.5, 0.8, 0.3)) /
                             std::abs(ref)});
  }
  add(rep, "two-site hybridization oracle", two_site, 0.01);

  impurity::AndersonParams truth = p;
  truth.model.u = 1.0;
  truth.w = {0.05};
  truth.v = {0.2};
  impurity::AndersonParams init = truth;
  init.eps = {1.0};
  init.v = {0.1};
  init.w = {0.01};
  const auto fit = bdmft::fit_bath(bdmft::hybridization_from_bath(truth, grid), 1, init);
  const double trip = std::max({std::abs(fit.params.eps[0] - 0.8), std::abs(fit.params.v[0] - 0.2),
                                std::abs(fit.params.w[0] - 0.05)});
  add(rep, "bath-fit round trip", trip, 1e-5);
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& options) {
  SelftestReport rep;
  cts_checks(rep, options);
  lehmann_checks(rep);
  hybridization_checks(rep);
  return rep;
}

}  // namespace ctsboson
