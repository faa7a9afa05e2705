#include <doctest.h>

#include "ctsboson/errors.hpp"
#include "ctsboson/impurity_ed.hpp"
#include "ctsboson/oracles.hpp"

#include <cmath>

using namespace ctsboson;
using namespace ctsboson::impurity;

namespace {

AndersonParams atomic(double mu, int l_b) {
  AndersonParams p;
  p.model = {0.0, mu, 6};
  p.eps.assign(l_b, 1.0);
  p.v.assign(l_b, 0.0);
  p.w.assign(l_b, 0.0);
  return p;
}

AndersonParams generic() {
  AndersonParams p;
  p.model = {0.05, 0.7, 6};
  p.phi_c = 0.4;
  p.eps = {0.3, 1.1};
  p.v = {0.2, -0.15};
  p.w = {0.07, 0.03};
  return p;
}

struct Fluct {
  Eigen::VectorXd g, up, down;  // |0>, db^dag|0>, db|0>
};

Fluct fluct(const EDSolution& sol, const ProductSpace& s) {
  Fluct f;
  f.g = sol.eig.vectors.col(0);
  f.up = s.b0.transpose() * f.g - sol.result.b_signed * f.g;
  f.down = s.b0 * f.g - sol.result.b_signed * f.g;
  return f;
}

}  // namespace

TEST_CASE("decoupled atomic limit") {
  for (int l_b : {1, 2, 3}) {
    const auto p = atomic(0.4, l_b);
    const auto sol = solve(p, TruncationScheme::fock(6));
    const auto& r = sol.result;
    CHECK(r.e_aim == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(r.phi == doctest::Approx(0.0));
    CHECK(r.n_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.h_hyb_mean == doctest::Approx(0.0));
    for (double occ : r.bath_occupation) CHECK(occ == doctest::Approx(0.0));
  }
}

TEST_CASE("weak coupling against second-order perturbation theory") {
  for (double w : {0.0, 0.03}) {
    AndersonParams p = atomic(0.4, 1);
    p.eps = {0.5};
    p.v = {0.05};
    p.w = {w};
    const auto r = solve(p, TruncationScheme::fock(6)).result;
    const double shift = oracles::second_order_shift(1.0, 0.4, 1, 0.5, 0.05, w);
    CAPTURE(w);
    CHECK(shift < 0.0);
    CHECK(std::abs(r.e_aim - (-0.4 + shift)) < 2e-2 * std::abs(shift));
    CHECK(r.h_hyb_mean < 0.0);
    // Hellmann-Feynman: second-order energy is quadratic in the coupling, so <H_hyb> ~ 2 shift
    CHECK(r.h_hyb_mean == doctest::Approx(2.0 * shift).epsilon(5e-2));
  }
}

TEST_CASE("Hamiltonian structure") {
  for (auto s : {TruncationScheme::fock(5), TruncationScheme::cts(4, 1.3)}) {
    for (int l_b = 1; l_b <= 3; ++l_b) {
      AndersonParams p = generic();
      p.eps.resize(l_b, 0.9);
      p.v.resize(l_b, 0.1);
      p.w.resize(l_b, 0.05);
      const auto h = build_aim_hamiltonian(p, s);
      const Eigen::MatrixXd& m = h.matrix();
      CHECK(h.dim() == s.dim() << l_b);
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        int nz = 0;
        for (Eigen::Index i = 0; i < m.rows(); ++i)
          if (m(i, j) != 0.0) ++nz;
        CHECK(nz <= 3 * (1 + 2 * l_b));
      }
    }
  }
}

TEST_CASE("condensate drive breaks the symmetry") {
  AndersonParams p = atomic(0.4, 1);
  p.model.j_over_u = 0.5;
  p.phi_c = 1.0;
  const auto r = solve(p, TruncationScheme::fock(10)).result;
  CHECK(r.phi > 0.1);
  CHECK(r.b_signed > 0.0);
}

TEST_CASE("atomic Lehmann poles") {
  const auto p = atomic(0.4, 2);
  const auto scheme = TruncationScheme::fock(6);
  const auto sol = solve(p, scheme);
  const MatsubaraGrid grid;
  const auto g = lehmann_green(sol.eig, lift(build_operators(scheme), 2), sol.result.b_signed, grid);
  REQUIRE(g.omegas.size() == 256u);
  CHECK(g.omegas[0] == doctest::Approx(2.0 * M_PI / 40.0));
  CHECK_FALSE(g.degenerate_ground);
  double err = 0.0, err12 = 0.0;
  for (std::size_t k = 0; k < g.omegas.size(); ++k) {
    const std::complex<double> iw(0.0, g.omegas[k]);
    const auto ref = 2.0 / (iw - 0.6) - 1.0 / (iw + 0.4);
    err = std::max(err, std::abs(g.g11[k] - ref));
    err12 = std::max(err12, std::abs(g.g12[k]));
  }
  CHECK(err < 1e-12);
  CHECK(err12 < 1e-12);
  const std::complex<double> iw_last(0.0, g.omegas.back());
  // leading 1/(iw) coefficient; the 1/(iw)^2 moment lives in the imaginary part
  CHECK(std::abs((iw_last * g.g11.back()).real() - 1.0) < 0.02);
  CHECK(static_susceptibility(sol.eig, lift(build_operators(scheme), 2), 0.0) ==
        doctest::Approx(2.0 / 0.6 + 1.0 / 0.4));
}

TEST_CASE("Lehmann completeness and sum rule for a coupled, symmetry-broken impurity") {
  const auto p = generic();
  const auto scheme = TruncationScheme::fock(12);
  const auto space = lift(build_operators(scheme), p.l_b());
  const auto sol = solve(p, scheme);
  const auto f = fluct(sol, space);

  const Eigen::VectorXd up_m = sol.eig.vectors.transpose() * f.up;
  const Eigen::VectorXd down_m = sol.eig.vectors.transpose() * f.down;
  CHECK(std::abs(up_m.squaredNorm() - f.up.squaredNorm()) < 1e-10);
  CHECK(std::abs(down_m.squaredNorm() - f.down.squaredNorm()) < 1e-10);
  // the ground state itself carries no fluctuation weight
  CHECK(std::abs(up_m[0]) < 1e-10);
  CHECK(std::abs(down_m[0]) < 1e-10);

  const MatsubaraGrid grid{40.0, 4000};
  const auto g = lehmann_green(sol.eig, space, sol.result.b_signed, grid);
  const std::complex<double> iw(0.0, g.omegas.back());
  const double commutator = f.up.squaredNorm() - f.down.squaredNorm();
  CHECK(commutator == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs((iw * g.g11.back()).real() - commutator) < 0.02);
  CHECK(sol.result.phi > 0.0);
  for (double occ : sol.result.bath_occupation) {
    CHECK(occ >= -1e-12);
    CHECK(occ <= 1.0 + 1e-12);
  }
}

TEST_CASE("gauge: flipping phi_C flips <b0> only") {
  auto p = generic();
  // (-1)^n maps the tail state onto alpha -> -alpha, so only Fock bases carry the symmetry
  const auto scheme = TruncationScheme::fock(9);
  const auto pos = solve(p, scheme).result;
  p.phi_c = -p.phi_c;
  const auto neg = solve(p, scheme).result;
  CHECK(neg.b_signed == doctest::Approx(-pos.b_signed).epsilon(1e-10));
  CHECK(neg.phi == doctest::Approx(pos.phi).epsilon(1e-10));
  CHECK(neg.e_aim == doctest::Approx(pos.e_aim).epsilon(1e-12));
  CHECK(neg.n_mean == doctest::Approx(pos.n_mean).epsilon(1e-10));
  CHECK(neg.h_hyb_mean == doctest::Approx(pos.h_hyb_mean).epsilon(1e-10));
}

TEST_CASE("tail state at alpha = 0 reproduces the Fock space one state larger") {
  const auto p = generic();
  for (int nc : {3, 5}) {
    const auto a = solve(p, TruncationScheme::cts(nc, 0.0)).result;
    const auto b = solve(p, TruncationScheme::fock(nc + 1)).result;
    CAPTURE(nc);
    CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(a.phi - b.phi) < 1e-10);
    CHECK(std::abs(a.n_mean - b.n_mean) < 1e-10);
    CHECK(std::abs(a.nn_mean - b.nn_mean) < 1e-10);
    CHECK(std::abs(a.h_hyb_mean - b.h_hyb_mean) < 1e-10);
  }
}

TEST_CASE("non-interacting two-site fixture against the hybridization formula") {
  AndersonParams p;
  p.model = {0.0, -0.5, 6, 0.0};
  p.eps = {0.8};
  p.v = {0.3};
  p.w = {0.0};
  const auto scheme = TruncationScheme::fock(12);
  const auto sol = solve(p, scheme);
  const auto g = lehmann_green(sol.eig, lift(build_operators(scheme), 1), sol.result.b_signed,
                               MatsubaraGrid{});
  double worst = 0.0;
  for (std::size_t k = 0; k < g.omegas.size(); ++k) {
    const auto ref = oracles::two_site_green(g.omegas[k], 0.5, 0.8, 0.3);
    worst = std::max(worst, std::abs(g.g11[k] - ref) / std::abs(ref));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("degenerate ground state is flagged") {
  // mu/U = 1 puts |1> and |2> at equal energy
  const auto p = atomic(1.0, 1);
  const auto scheme = TruncationScheme::fock(5);
  const auto sol = solve(p, scheme);
  const auto g = lehmann_green(sol.eig, lift(build_operators(scheme), 1), sol.result.b_signed,
                               MatsubaraGrid{});
  CHECK(g.degenerate_ground);
}

TEST_CASE("validation") {
  AndersonParams p = generic();
  p.eps[0] = 0.0;
  CHECK_THROWS_AS(build_aim_hamiltonian(p, TruncationScheme::fock(4)), InvalidInput);
  p = generic();
  p.w.pop_back();
  CHECK_THROWS_AS(build_aim_hamiltonian(p, TruncationScheme::fock(4)), InvalidInput);
  p = atomic(0.4, 5);
  CHECK_THROWS_AS(build_aim_hamiltonian(p, TruncationScheme::fock(4)), InvalidInput);
  p = atomic(0.4, 4);
  CHECK_THROWS_AS(build_aim_hamiltonian(p, TruncationScheme::fock(65)), ConfigError);
  CHECK_NOTHROW(build_aim_hamiltonian(p, TruncationScheme::fock(64)));
}
