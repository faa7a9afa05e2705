#pragma once

// Homogeneous single-site Gutzwiller mean-field solver. The local problem
//
//   H_loc(phi) = -J z (phi b^dag + phi b) + U/2 n(n-1) - mu n
//
// is solved self-consistently in phi = <b> inside the chosen truncated basis.
// For tail-state bases the parameter alpha is optimized on top of that.

#include "ctsboson/cts_basis.hpp"
#include "ctsboson/model.hpp"

#include <Eigen/Dense>

#include <chrono>

namespace ctsboson::gutzwiller {

struct Config {
  ModelParams model;
  TruncationScheme scheme;
  double mixing = 0.7;
  double tol_phi = 1e-10;
  int max_iter = 2000;
  double alpha_max = 0.0;  // <= 0 selects 2 sqrt(N_c) + 3
  double alpha_tol = 1e-6;
  double phi_start = 0.5;  // superfluid seed; the Mott seed phi = 0 is always tried too

  [[nodiscard]] double alpha_upper() const;
  void validate() const;
};

struct Result {
  double phi = 0.0;  // gauge-fixed <b> >= 0
  double n_mean = 0.0;
  double nn_mean = 0.0;
  double e_paper = 0.0;  // <H_loc(phi)> in the self-consistent state
  double e_site = 0.0;   // -J z <b>^2 + U/2 <n(n-1)> - mu <n>
  double alpha_opt = 0.0;
  int iters = 0;
  std::chrono::duration<double> wall_time{0};
  bool converged = false;
};

struct Energies {
  double e_paper = 0.0;
  double e_site = 0.0;
};

/// Local Hamiltonian at fixed phi in the basis of `ops`.
Eigen::MatrixXd local_hamiltonian(const OperatorSet& ops, const ModelParams& model, double phi);

/// Energies of a normalized coefficient vector. Throws InvalidInput if
/// | |psi| - 1 | > 1e-10 or the dimension does not match the scheme.
Energies energy(const Eigen::VectorXd& psi, double phi, const Config& config);

/// Self-consistent phi at the scheme's own alpha, two seeds (phi_start and 0);
/// the lower e_site wins and exact ties go to the Mott seed.
Result solve_fixed_alpha(const Config& config);

/// Fock schemes: solve_fixed_alpha. Tail-state schemes: minimizes the converged
/// e_site over alpha in [0, alpha_upper()].
Result solve(const Config& config);

}  // namespace ctsboson::gutzwiller
