#include <doctest.h>

#include "ctsboson/bdmft.hpp"
#include "ctsboson/errors.hpp"

#include <cmath>

using namespace ctsboson;
using namespace ctsboson::bdmft;

namespace {

AndersonParams bath(std::vector<double> eps, std::vector<double> v, std::vector<double> w) {
  AndersonParams p;
  p.model = {0.1, 0.4, 6};
  p.eps = std::move(eps);
  p.v = std::move(v);
  p.w = std::move(w);
  return p;
}

Config make(double j, double mu, TruncationScheme s) {
  Config c;
  c.model = {j, mu, 6};
  c.scheme = s;
  return c;
}

}  // namespace

TEST_CASE("hybridization of a single orbital") {
  const MatsubaraGrid grid;
  const auto d = hybridization_from_bath(bath({0.5}, {0.1}, {0.0}), grid);
  const std::complex<double> iw(0.0, 2.0 * M_PI / 40.0);
  CHECK(std::abs(d.g11[0] - 0.01 / (iw - 0.5)) < 1e-15);
  for (auto x : d.g12) CHECK(x == std::complex<double>(0.0));

  // reality condition: the formula at -iw is the conjugate
  const auto p = bath({0.3, 1.7}, {0.2, 0.4}, {-0.1, 0.05});
  const auto e = hybridization_from_bath(p, grid);
  for (int k : {0, 17, 255}) {
    const std::complex<double> miw(0.0, -grid.omega(k));
    std::complex<double> d11 = 0.0, d12 = 0.0;
    for (int l = 0; l < 2; ++l) {
      d11 += p.v[l] * p.v[l] / (miw - p.eps[l]) - p.w[l] * p.w[l] / (miw + p.eps[l]);
      d12 += p.v[l] * p.w[l] * (1.0 / (miw - p.eps[l]) - 1.0 / (miw + p.eps[l]));
    }
    CHECK(std::abs(d11 - std::conj(e.g11[k])) < 1e-14);
    CHECK(std::abs(d12 - std::conj(e.g12[k])) < 1e-14);
  }
}

TEST_CASE("Bethe closure") {
  impurity::AndersonParams atom;
  atom.model = {0.0, 0.4, 6};
  atom.eps = {1.0};
  atom.v = {0.0};
  atom.w = {0.0};
  const auto scheme = TruncationScheme::fock(6);
  const auto sol = impurity::solve(atom, scheme);
  const auto g = impurity::lehmann_green(sol.eig, impurity::lift(build_operators(scheme), 1), 0.0,
                                         MatsubaraGrid{});
  const double j = 0.05;
  const auto t = target_hybridization(g, j, 6);
  const auto t2 = target_hybridization(g, 2.0 * j, 6);
  const auto t0 = target_hybridization(g, 0.0, 6);
  for (std::size_t k = 0; k < g.omegas.size(); ++k) {
    const std::complex<double> iw(0.0, g.omegas[k]);
    const auto ref = 6.0 * j * j * (2.0 / (iw - 0.6) - 1.0 / (iw + 0.4));
    CHECK(std::abs(t.g11[k] - ref) < 1e-13);
    CHECK(std::abs(t2.g11[k] - 4.0 * t.g11[k]) < 1e-13);
    CHECK(t0.g11[k] == std::complex<double>(0.0));
  }
}

TEST_CASE("non-interacting two-site fixture: impurity G against [g0^-1 - Delta]^-1") {
  impurity::AndersonParams p;
  p.model = {0.0, -0.5, 6, 0.0};
  p.eps = {0.8};
  p.v = {0.3};
  p.w = {0.0};
  const auto scheme = TruncationScheme::fock(12);
  const MatsubaraGrid grid;
  const auto sol = impurity::solve(p, scheme);
  const auto g = impurity::lehmann_green(sol.eig, impurity::lift(build_operators(scheme), 1),
                                         sol.result.b_signed, grid);
  const auto delta = hybridization_from_bath(p, grid);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.omegas.size(); ++k) {
    const std::complex<double> iw(0.0, g.omegas[k]);
    const auto ref = 1.0 / (iw + p.model.mu_over_u - delta.g11[k]);
    worst = std::max(worst, std::abs(g.g11[k] - ref) / std::abs(ref));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("bath fit round trip") {
  const MatsubaraGrid grid;
  const auto truth = bath({0.8}, {0.2}, {0.05});
  const auto target = hybridization_from_bath(truth, grid);
  const auto fit = fit_bath(target, 1, bath({1.0}, {0.1}, {0.01}));
  CHECK(std::abs(fit.params.eps[0] - 0.8) < 1e-5);
  CHECK(std::abs(fit.params.v[0] - 0.2) < 1e-5);
  CHECK(std::abs(fit.params.w[0] - 0.05) < 1e-5);
  CHECK_FALSE(fit.poor_fit);

  // sign gauge and orbital order are canonical
  const auto truth2 = bath({1.5, 0.4}, {-0.3, 0.25}, {0.1, -0.02});
  const auto fit2 = fit_bath(hybridization_from_bath(truth2, grid), 2,
                             bath({1.0, 2.0}, {0.1, 0.1}, {0.01, 0.01}));
  CHECK(fit2.params.eps[0] < fit2.params.eps[1]);
  CHECK(fit2.params.v[0] >= 0.0);
  CHECK(fit2.params.v[1] >= 0.0);
  CHECK(fit2.params.eps[0] == doctest::Approx(0.4).epsilon(1e-4));
  CHECK(fit2.params.w[1] == doctest::Approx(-0.1).epsilon(1e-4));
}

TEST_CASE("zero target decouples the bath") {
  const MatsubaraGrid grid;
  auto zero = hybridization_from_bath(bath({1.0}, {0.0}, {0.0}), grid);
  const auto fit = fit_bath(zero, 2, bath({1.0, 2.0}, {0.1, 0.1}, {0.01, 0.01}));
  for (int l = 0; l < 2; ++l) {
    CHECK(std::abs(fit.params.v[l]) < 1e-6);
    CHECK(std::abs(fit.params.w[l]) < 1e-6);
  }
}

TEST_CASE("one orbital cannot represent a two-orbital target") {
  const MatsubaraGrid grid;
  const auto target = hybridization_from_bath(bath({0.3, 2.5}, {0.3, 0.5}, {0.1, -0.2}), grid);
  const auto one = fit_bath(target, 1, bath({1.0}, {0.1}, {0.01}));
  const auto two = fit_bath(target, 2, bath({1.0, 2.0}, {0.1, 0.1}, {0.01, 0.01}));
  CHECK((one.poor_fit || one.chi2 > two.chi2));
  CHECK(two.chi2 < 1e-12 * weighted_norm2(target));
}

TEST_CASE("observables: atomic Mott site") {
  impurity::AndersonParams p = bath({1.0}, {0.0}, {0.0});
  p.model.j_over_u = 0.0;
  const auto r = impurity::solve(p, TruncationScheme::fock(6)).result;
  const auto o = observables(r, p);
  CHECK(o.e_tot_site == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(o.e_kin_con == 0.0);
  CHECK(o.g_c0 == 0.0);
}

TEST_CASE("deep Mott insulator") {
  const auto r = solve(make(0.001, 0.4, TruncationScheme::fock(6)));
  CHECK(r.converged);
  CHECK(r.phi < 1e-6);
  CHECK(r.n_mean == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(r.e_tot_site + 0.4) < 1e-3);
  CHECK(r.mott_stability < 1.0);
}

TEST_CASE("superfluid run: fixed-point residuals and kinetic-energy identity") {
  const Config c = make(0.1, 0.4, TruncationScheme::cts(4));
  const auto r = solve(c);
  REQUIRE(r.converged);
  CHECK(r.phi > 0.1);
  CHECK(r.phi_residual < 2.0 * c.tol_phi / c.mixing_phi);
  CHECK(r.delta_change < c.tol_delta);
  CHECK(r.g_c0 <= 1e-12);
  CHECK(r.e_kin_con == doctest::Approx(c.model.zj() * r.g_c0).epsilon(1e-14));
  CHECK(r.alpha_opt > 0.0);
  CHECK(r.alpha_opt <= c.alpha_upper());
  CHECK(r.bath.eps[0] <= r.bath.eps[1]);

  const auto again = solve(c);
  CHECK(again.e_tot_site == r.e_tot_site);
  CHECK(again.phi == r.phi);
  CHECK(again.iters == r.iters);
}

TEST_CASE("deep superfluid: condensate dominates the connected correlator") {
  const auto r = solve(make(1.0, 0.5, TruncationScheme::fock(20)));
  REQUIRE(r.converged);
  CHECK(r.g_c0 <= 1e-12);
  CHECK(std::abs(r.g_c0) / (r.phi * r.phi) < 0.05);
}

TEST_CASE("tail state at alpha -> 0 reproduces the Fock space one state larger") {
  Config cts = make(0.05, 0.4, TruncationScheme::cts(3));
  cts.alpha_scheme = AlphaScheme::fixed(1e-9);
  const auto a = solve(cts);
  const auto b = solve(make(0.05, 0.4, TruncationScheme::fock(4)));
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(std::abs(a.phi - b.phi) < 1e-8);
  CHECK(std::abs(a.n_mean - b.n_mean) < 1e-8);
  CHECK(std::abs(a.e_tot_site - b.e_tot_site) < 1e-8);
  CHECK(std::abs(a.g_c0 - b.g_c0) < 1e-8);
}

TEST_CASE("outer alpha minimization lies below a fixed-alpha scan") {
  Config c = make(0.1, 0.4, TruncationScheme::cts(3));
  c.alpha_scheme = AlphaScheme::minimize_e_tot();
  const auto best = solve(c);
  REQUIRE(best.converged);
  for (double a : {0.2, 0.6, 1.0, 1.5, 2.5}) {
    Config f = c;
    f.alpha_scheme = AlphaScheme::fixed(a);
    const auto r = solve(f);
    CAPTURE(a);
    CHECK(best.e_tot_site <= r.e_tot_site + 1e-9);
  }
  CHECK(best.alpha_opt > 0.0);
  CHECK(best.alpha_opt < c.alpha_upper());
}

TEST_CASE("alpha scheme parsing and config validation") {
  CHECK(parse_alpha_scheme("eaim").kind == AlphaScheme::Kind::MinimizeEAim);
  CHECK(parse_alpha_scheme("etot").kind == AlphaScheme::Kind::MinimizeEtot);
  CHECK(parse_alpha_scheme("fixed:1.25").value == 1.25);
  CHECK(parse_alpha_scheme("fixed:1.25").label() == "fixed:1.25");
  CHECK_THROWS_AS(parse_alpha_scheme("fixed:"), InvalidInput);
  CHECK_THROWS_AS(parse_alpha_scheme("fixed:-1"), InvalidInput);
  CHECK_THROWS_AS(parse_alpha_scheme("fixed:1x"), InvalidInput);
  CHECK_THROWS_AS(parse_alpha_scheme("best"), InvalidInput);

  Config c = make(0.1, 0.4, TruncationScheme::fock(4));
  c.n_omega = 32;
  CHECK_THROWS_AS(solve(c), InvalidInput);
  c = make(0.1, 0.4, TruncationScheme::fock(4));
  c.l_b = 5;
  CHECK_THROWS_AS(solve(c), InvalidInput);
  c = make(0.1, 0.4, TruncationScheme::fock(4));
  c.mixing_phi = 0.0;
  CHECK_THROWS_AS(solve(c), InvalidInput);
  c = make(0.1, 0.4, TruncationScheme::fock(80));
  c.l_b = 4;
  CHECK_THROWS_AS(solve(c), ConfigError);
  CHECK_THROWS_AS(optimize_alpha_outer(make(0.1, 0.4, TruncationScheme::cts(3))), InvalidInput);
}
