#pragma once

// Zero-temperature bosonic DMFT on the Bethe lattice with an ED impurity solver.
//
// Self-consistency: Delta = z J^2 G_conn (componentwise on the Nambu pair) and
// phi_C = <b0>. The hybridization is represented by L_b hard-core bath orbitals
// fitted on a fictitious Matsubara grid.

#include "ctsboson/cts_basis.hpp"
#include "ctsboson/impurity_ed.hpp"
#include "ctsboson/model.hpp"

#include <chrono>
#include <optional>
#include <string>

namespace ctsboson::bdmft {

using impurity::AndersonParams;
using impurity::MatsubaraGrid;
using impurity::NambuGreen;

struct AlphaScheme {
  enum class Kind { MinimizeEAim, MinimizeEtot, Fixed };
  Kind kind = Kind::MinimizeEAim;
  double value = 0.0;  // used by Fixed

  static AlphaScheme minimize_e_aim() { return {Kind::MinimizeEAim, 0.0}; }
  static AlphaScheme minimize_e_tot() { return {Kind::MinimizeEtot, 0.0}; }
  static AlphaScheme fixed(double a) { return {Kind::Fixed, a}; }

  /// "eaim", "etot" or "fixed:<value>"
  [[nodiscard]] std::string label() const;
};

AlphaScheme parse_alpha_scheme(const std::string& text);

/// Starting point of a self-consistency run.
struct Seed {
  double phi_c = 0.5;
  std::vector<double> eps, v, w;
};

/// Default cold start: eps = (1, 2, ...), V = 0.1, W = 0.01.
Seed cold_seed(int l_b, double phi_c);

struct Config {
  ModelParams model;
  TruncationScheme scheme;
  int l_b = 2;
  double beta_fict = 40.0;
  int n_omega = 256;
  double mixing_delta = 0.5;
  double mixing_phi = 0.5;
  double tol_phi = 1e-8;
  double tol_delta = 1e-6;
  int max_sc_iter = 300;
  AlphaScheme alpha_scheme;
  double alpha_max = 0.0;  // <= 0 selects 2 sqrt(N_c) + 3
  double alpha_tol = 1e-5;
  double alpha_tol_outer = 1e-4;
  std::optional<Seed> warm_start;  // replaces the phi_C = 0.5 cold start

  [[nodiscard]] double alpha_upper() const;
  [[nodiscard]] MatsubaraGrid grid() const { return {beta_fict, n_omega}; }
  void validate() const;
};

struct Result {
  double phi = 0.0;
  double n_mean = 0.0;
  double nn_mean = 0.0;
  double alpha_opt = 0.0;
  double e_tot_site = 0.0;
  double e_kin_con = 0.0;
  double g_c0 = 0.0;
  double e_aim = 0.0;
  AndersonParams bath;  // converged bath and phi_C
  int iters = 0;
  std::chrono::duration<double> wall_time{0};
  bool converged = false;

  // diagnostics
  double phi_residual = 0.0;    // |<b0> - phi_C| at the last iteration
  double delta_change = 0.0;    // relative change of the fitted Delta in the last iteration
  double fit_residual = 0.0;    // relative distance between Delta_target and Delta_fit
  bool poor_fit = false;
  bool degenerate_ground = false;
  double mott_stability = 0.0;  // J z chi_static; a phi = 0 solution is unstable above 1
};

/// Delta11 = sum_l V_l^2/(iw - eps_l) - W_l^2/(iw + eps_l),
/// Delta12 = sum_l V_l W_l [1/(iw - eps_l) - 1/(iw + eps_l)].
NambuGreen hybridization_from_bath(const AndersonParams& params, const MatsubaraGrid& grid);

/// z J^2 G, componentwise.
NambuGreen target_hybridization(const NambuGreen& g, double j, int z);

/// sum_m (|a11 - b11|^2 + |a12 - b12|^2) / w_m
double weighted_distance2(const NambuGreen& a, const NambuGreen& b);
double weighted_norm2(const NambuGreen& a);

struct FitResult {
  AndersonParams params;  // orbitals sorted by eps ascending, V_l >= 0
  double chi2 = 0.0;
  bool poor_fit = false;  // chi2 > 1e-2 |Delta_target|^2
};

/// Least-squares bath fit with weights 1/w_m, Nelder-Mead from `init` and three
/// fixed perturbations of it. `init` supplies model, phi_C and the start orbitals.
FitResult fit_bath(const NambuGreen& target, int l_b, const AndersonParams& init);

struct Observables {
  double e_tot_site = 0.0;
  double e_kin_con = 0.0;
  double g_c0 = 0.0;
};

/// e_kin_con = h_hyb/2, g_c0 = h_hyb/(2 J z) (0 at J = 0),
/// e_tot_site = U/2 <n(n-1)> - mu <n> - J z phi phi_C + h_hyb/2.
Observables observables(const impurity::EDResult& ed, const AndersonParams& params);

/// One self-consistency run from the SF seed and one from phi_C = 0; see the
/// implementation for the selection rule between the two.
Result self_consistency_loop(const Config& config);

/// Minimizes the converged e_tot_site over alpha; each evaluation is a full
/// self_consistency_loop at a fixed alpha. Requires alpha_scheme = MinimizeEtot.
Result optimize_alpha_outer(const Config& config);

/// Dispatches on alpha_scheme.
Result solve(const Config& config);

}  // namespace ctsboson::bdmft
