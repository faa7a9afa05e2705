#pragma once

// Exact diagonalization of the effective Anderson impurity model
//
//   H = U/2 n0(n0 - 1) - mu n0 + sum_l eps_l a_l^dag a_l - J z phi_C (b0^dag + b0)
//       + sum_l [ V_l (a_l^dag b0 + a_l b0^dag) + W_l (a_l b0 + a_l^dag b0^dag) ]
//
// on (impurity basis) x {0,1}^L_b. The bath orbitals are hard-core bosons.
//
// Product basis ordering: state index = i_imp * 2^L_b + bits, where orbital l
// occupies bit (L_b - 1 - l) of `bits`; i.e. Kronecker products with the
// impurity factor leftmost, followed by orbitals 0, 1, ..., L_b - 1.

#include "ctsboson/cts_basis.hpp"
#include "ctsboson/model.hpp"
#include "ctsboson/numerics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ctsboson::impurity {

inline constexpr double kEpsMin = 1e-6;
inline constexpr int kMaxBath = 4;

struct AndersonParams {
  ModelParams model;
  double phi_c = 0.0;  // cavity condensate <b>_C
  std::vector<double> eps;
  std::vector<double> v;
  std::vector<double> w;

  [[nodiscard]] int l_b() const { return static_cast<int>(eps.size()); }
  /// Throws InvalidInput unless 1 <= L_b <= 4, the arrays agree in length and
  /// every eps_l >= kEpsMin.
  void validate() const;
};

/// Impurity and bath operators lifted to the product space.
struct ProductSpace {
  int imp_dim = 0;
  int l_b = 0;
  int dim = 0;
  Eigen::MatrixXd b0, n0, nn0;
  std::vector<Eigen::MatrixXd> bath_n;  // a_l^dag a_l
};

ProductSpace lift(const OperatorSet& ops, int l_b);

/// Hamiltonian above. Throws ConfigError if the product dimension exceeds 1024.
numerics::SymmetricMatrix build_aim_hamiltonian(const AndersonParams& params,
                                                const TruncationScheme& scheme);

/// Only the V/W coupling line of the Hamiltonian.
Eigen::MatrixXd hybridization_term(const AndersonParams& params, const OperatorSet& ops);

/// Lowest eigenvalue of build_aim_hamiltonian (eigenvalues-only solve).
double ground_energy(const AndersonParams& params, const TruncationScheme& scheme);

struct EDResult {
  Eigen::VectorXd energies;  // ascending
  double phi = 0.0;          // |<b0>| (gauge-fixed)
  double b_signed = 0.0;     // <b0> before gauge fixing
  double n_mean = 0.0;
  double nn_mean = 0.0;
  double h_hyb_mean = 0.0;  // <V/W coupling line>
  double e_aim = 0.0;       // ground-state energy
  std::vector<double> bath_occupation;
};

struct EDSolution {
  numerics::EigenDecomposition eig;
  EDResult result;
};

/// Full diagonalization of `h` and ground-state expectation values.
EDSolution ground_observables(const numerics::SymmetricMatrix& h, const AndersonParams& params,
                              const TruncationScheme& scheme);

/// Convenience: build, diagonalize and measure.
EDSolution solve(const AndersonParams& params, const TruncationScheme& scheme);

/// Fictitious bosonic Matsubara grid w_m = 2 pi m / beta, m = 1..n.
struct MatsubaraGrid {
  double beta = 40.0;
  int n = 256;

  [[nodiscard]] double omega(int k) const;  // k = 0..n-1 -> m = k + 1
  [[nodiscard]] std::vector<double> omegas() const;
};

/// Nambu pair (normal g11, anomalous g12) on the positive Matsubara frequencies.
struct NambuGreen {
  double beta_fict = 0.0;
  std::vector<double> omegas;
  std::vector<std::complex<double>> g11;
  std::vector<std::complex<double>> g12;
  bool degenerate_ground = false;  // near-degenerate ground state with weight on it
};

/// Connected T = 0 Green's functions of db = b0 - <b0> from the Lehmann sums
///   g11 = sum_m |<m|db^dag|0>|^2/(iw - dE_m) - |<m|db|0>|^2/(iw + dE_m)
///   g12 = sum_m <0|db|m><m|db|0> [1/(iw - dE_m) - 1/(iw + dE_m)].
NambuGreen lehmann_green(const numerics::EigenDecomposition& eig, const ProductSpace& space,
                         double b_signed, const MatsubaraGrid& grid);

/// Static normal susceptibility -g11(i0) = sum_m (|<m|db^dag|0>|^2 + |<m|db|0>|^2) / dE_m.
double static_susceptibility(const numerics::EigenDecomposition& eig, const ProductSpace& space,
                             double b_signed);

}  // namespace ctsboson::impurity
