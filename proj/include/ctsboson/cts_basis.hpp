#pragma once

// Truncated local boson basis: either the hard cutoff {|0>, ..., |N_c-1>} or the
// same set extended by one coherent-tail state
//
//   |alpha_{N_c}> = c_{N_c} sum_{n >= N_c} alpha^n / sqrt(n!) |n>,
//
// a coherent state with all occupations below N_c projected out. The operator
// matrices below are the projections of b, b^dag, n and n(n-1) onto that basis.

#include <Eigen/Dense>

#include <string>

namespace ctsboson {

enum class BasisKind { Fock, Cts };

struct TruncationScheme {
  BasisKind kind = BasisKind::Fock;
  int n_c = 1;         // number of retained Fock states
  double alpha = 0.0;  // tail-state parameter, used only for kind == Cts

  static TruncationScheme fock(int n_c) { return {BasisKind::Fock, n_c, 0.0}; }
  static TruncationScheme cts(int n_c, double alpha = 0.0) { return {BasisKind::Cts, n_c, alpha}; }

  [[nodiscard]] int dim() const { return kind == BasisKind::Cts ? n_c + 1 : n_c; }
  [[nodiscard]] bool is_cts() const { return kind == BasisKind::Cts; }
  [[nodiscard]] TruncationScheme with_alpha(double a) const { return {kind, n_c, a}; }

  /// "fock<N>" or "cts<N>"; alpha is not part of the label.
  [[nodiscard]] std::string label() const;

  /// Throws InvalidInput unless n_c >= 1 (Fock) / n_c >= 2 (Cts) and alpha is finite, >= 0.
  void validate() const;

  friend bool operator==(const TruncationScheme&, const TruncationScheme&) = default;
};

/// Parses "fock:<N>" or "cts:<N>" (alpha set to 0).
TruncationScheme parse_scheme(const std::string& text);

struct OperatorSet {
  int dim = 0;
  Eigen::MatrixXd b;
  Eigen::MatrixXd b_dag;  // exactly b^T
  Eigen::MatrixXd n;      // diagonal
  Eigen::MatrixXd nn;     // diagonal, n(n-1)
  double norm_const = 1.0;
};

/// Normalization c_{N_c} = (sum_{n >= N_c} alpha^{2n} / n!)^{-1/2}, summed as a
/// tail series (never as exp(alpha^2) minus a partial sum). For alpha == 0 and
/// n_c > 0 the constant diverges and +inf is returned; build_operators treats
/// that point through its limit instead.
double cts_norm_const(double alpha, int n_c);

/// R = sum_{k >= 0} alpha^{2k} N_c! / (N_c + k)!, the tail sum relative to its
/// leading term. Every closed-form matrix element is expressed through it.
double cts_tail_ratio(double alpha, int n_c);

struct CtsMoments {
  double n_mean = 0.0;   // <alpha|n|alpha>
  double nn_mean = 0.0;  // <alpha|n(n-1)|alpha>
};

/// Diagonal tail-state moments from the squared norms of b|alpha> and bb|alpha>.
CtsMoments cts_moments(double alpha, int n_c);

OperatorSet build_operators(const TruncationScheme& scheme);

/// | <alpha|n|alpha> - sum_k <k|b|alpha>^2 |. Zero (to rounding) when b|alpha>
/// is expanded exactly inside the basis; zero by definition for Fock schemes.
double b_leakage_residual(const OperatorSet& ops, const TruncationScheme& scheme);

}  // namespace ctsboson
