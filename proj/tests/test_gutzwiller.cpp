#include <doctest.h>

#include "ctsboson/errors.hpp"
#include "ctsboson/gutzwiller.hpp"

#include <cmath>

using namespace ctsboson;
using namespace ctsboson::gutzwiller;

namespace {

Config make(double j, double mu, TruncationScheme s, int z = 6) {
  Config c;
  c.model = {j, mu, z};
  c.scheme = s;
  return c;
}

// Mean-field lobe boundary zJ_c/U = (n - x)(x - n + 1)/(1 + x), x = mu/U, n = ceil(x)
double lobe_boundary(double mu, int z) {
  const double n = std::ceil(mu);
  return (n - mu) * (mu - n + 1.0) / (1.0 + mu) / z;
}

}  // namespace

TEST_CASE("atomic limit: ground state |1> at mu/U = 0.4") {
  for (auto s : {TruncationScheme::fock(2), TruncationScheme::fock(6), TruncationScheme::cts(2, 0.3),
                 TruncationScheme::cts(5, 1.0)}) {
    const auto r = solve_fixed_alpha(make(0.0, 0.4, s));
    CHECK(r.converged);
    CHECK(r.phi == doctest::Approx(0.0));
    CHECK(r.n_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.e_site == doctest::Approx(-0.4).epsilon(1e-12));
  }
}

TEST_CASE("superfluid point J/U = mu/U = 0.4 against the Gross-Pitaevskii estimate") {
  const auto r = solve(make(0.4, 0.4, TruncationScheme::fock(20)));
  CHECK(r.converged);
  // GP oracle: minimize -zJ n + n^2/2 - mu n  =>  n = zJ + mu = 2.8, phi = sqrt(2.8).
  // Number squeezing at finite U pushes n above the GP value by ~8%.
  CHECK(std::abs(r.phi - std::sqrt(2.8)) <= 0.05 * std::sqrt(2.8));
  CHECK(std::abs(r.n_mean - 2.8) <= 0.10 * 2.8);
  // frozen from an independent numpy run (dense eigh + bounded scalar minimization of e_site(phi))
  CHECK(r.phi == doctest::Approx(1.7119815589).epsilon(1e-8));
  CHECK(r.n_mean == doctest::Approx(3.0354292064).epsilon(1e-8));
  CHECK(r.e_site == doctest::Approx(-4.3504083994).epsilon(1e-10));
}

TEST_CASE("Mott phase just inside the n = 1 lobe") {
  CHECK(lobe_boundary(0.4, 6) == doctest::Approx(0.028571).epsilon(1e-4));
  const auto r = solve(make(0.028, 0.4, TruncationScheme::fock(20)));
  CHECK(r.phi < 1e-6);
  CHECK(r.n_mean == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Mott detection below the analytic lobe boundary") {
  for (double mu : {0.4, 1.5, 2.5, 3.5}) {
    const int n = static_cast<int>(std::ceil(mu));
    const double jc = lobe_boundary(mu, 6);
    const auto r = solve(make(0.9 * jc, mu, TruncationScheme::fock(n + 2)));
    CAPTURE(mu);
    CHECK(r.phi < 1e-6);
    CHECK(std::abs(r.n_mean - std::round(r.n_mean)) <= 1e-8);
    const auto above = solve(make(1.1 * jc, mu, TruncationScheme::fock(n + 2)));
    CHECK(above.phi > 1e-3);
  }
}

TEST_CASE("energy(): fixed examples and the fixed-point identity") {
  Config c = make(0.1, 0.4, TruncationScheme::fock(4));
  Eigen::VectorXd one = Eigen::VectorXd::Zero(4);
  one[1] = 1.0;
  auto e1 = energy(one, 0.0, c);
  CHECK(e1.e_paper == doctest::Approx(-0.4));
  CHECK(e1.e_site == doctest::Approx(-0.4));
  Eigen::VectorXd vac = Eigen::VectorXd::Zero(4);
  vac[0] = 1.0;
  CHECK(energy(vac, 0.3, c).e_paper == 0.0);
  CHECK(energy(vac, 0.3, c).e_site == 0.0);

  CHECK_THROWS_AS(energy(2.0 * one, 0.0, c), InvalidInput);
  CHECK_THROWS_AS(energy(Eigen::VectorXd::Ones(3).normalized(), 0.0, c), InvalidInput);

  for (auto s : {TruncationScheme::fock(8), TruncationScheme::cts(3, 1.2)}) {
    const Config sf = make(0.2, 0.7, s);
    const auto r = solve_fixed_alpha(sf);
    REQUIRE(r.converged);
    CHECK(r.e_paper == doctest::Approx(r.e_site - sf.model.zj() * r.phi * r.phi).epsilon(1e-9));
  }
}

TEST_CASE("variational nesting of Fock cutoffs and the tail state") {
  for (double mu : {0.4, 1.5}) {
    for (double j : {0.02, 0.05, 0.1, 0.4}) {
      CAPTURE(mu);
      CAPTURE(j);
      double prev = 1e300;
      for (int nc = 2; nc <= 8; ++nc) {
        const double e = solve(make(j, mu, TruncationScheme::fock(nc))).e_site;
        CHECK(e <= prev + 1e-12);
        prev = e;
      }
      const double ref = solve(make(j, mu, TruncationScheme::fock(20))).e_site;
      for (int nc : {2, 4}) {
        const double fock_next = solve(make(j, mu, TruncationScheme::fock(nc + 1))).e_site;
        const auto cts = solve(make(j, mu, TruncationScheme::cts(nc)));
        CHECK(cts.e_site <= fock_next + 1e-12);
        CHECK(cts.e_site >= ref - 1e-9);
      }
    }
  }
}

TEST_CASE("tail state never loses to the extra Fock state at mu/U = J/U = 0.4") {
  const auto cts = solve(make(0.4, 0.4, TruncationScheme::cts(4)));
  const auto zero = solve_fixed_alpha(make(0.4, 0.4, TruncationScheme::cts(4, 1e-9)));
  CHECK(cts.e_site <= zero.e_site);
  CHECK(cts.alpha_opt > 0.0);
}

TEST_CASE("tail-state error shrinks monotonically with N_c") {
  const double ref = solve(make(0.4, 0.4, TruncationScheme::fock(20))).e_site;
  double prev = 1e300;
  for (int nc = 2; nc <= 7; ++nc) {
    const double diff = solve(make(0.4, 0.4, TruncationScheme::cts(nc))).e_site - ref;
    CAPTURE(nc);
    CHECK(diff >= -1e-9);
    CHECK(diff < prev);
    prev = diff;
  }
}

TEST_CASE("n = 4 lobe edge: tail state with N_c = 5 turns superfluid") {
  const double jc = lobe_boundary(3.5, 6);
  const auto r = solve(make(1.05 * jc, 3.5, TruncationScheme::cts(5)));
  CHECK(r.phi > 0.0);
  CHECK(r.phi > 1e-3);
}

TEST_CASE("gauge: a negative seed gives the same reported observables") {
  Config c = make(0.1, 0.7, TruncationScheme::fock(10));
  const auto pos = solve_fixed_alpha(c);
  c.phi_start = -0.5;
  const auto neg = solve_fixed_alpha(c);
  CHECK(neg.phi >= 0.0);
  CHECK(neg.phi == doctest::Approx(pos.phi).epsilon(1e-9));
  CHECK(neg.e_site == doctest::Approx(pos.e_site).epsilon(1e-12));
  CHECK(neg.n_mean == doctest::Approx(pos.n_mean).epsilon(1e-9));
}

TEST_CASE("fixed-point consistency at convergence") {
  Config c = make(0.15, 1.2, TruncationScheme::cts(4, 0.8));
  const auto r = solve_fixed_alpha(c);
  REQUIRE(r.converged);
  const auto ops = build_operators(c.scheme);
  const auto eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(local_hamiltonian(ops, c.model, r.phi));
  const Eigen::VectorXd psi = eig.eigenvectors().col(0);
  CHECK(std::abs(std::abs(psi.dot(ops.b * psi)) - r.phi) < 1e-9);
}

TEST_CASE("config validation") {
  Config c = make(-0.1, 0.4, TruncationScheme::fock(4));
  CHECK_THROWS_AS(solve(c), InvalidInput);
  c = make(0.1, 0.4, TruncationScheme::fock(4));
  c.mixing = 0.0;
  CHECK_THROWS_AS(solve(c), InvalidInput);
  CHECK_THROWS_AS(solve(make(0.1, 0.4, TruncationScheme::cts(1))), InvalidInput);
}
