#pragma once

// Reference computations used only for verification (unit tests and the
// `selftest` subcommand). They deliberately take a different route from the
// production code: explicit vectors in a large Fock space, explicit sums.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ctsboson::oracles {

struct ProjectedOperators {
  Eigen::MatrixXd b, n, nn, gram;
  double norm_const = 0.0;
};

/// Builds the tail state as an explicit long-double vector in a Fock space of
/// several dozen states beyond N_c, then projects b, n, n(n-1) onto
/// {|0>, ..., |N_c-1>, |alpha>} by dense matrix products.
ProjectedOperators project(double alpha, int n_c);

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Second-order ground-state energy shift of an atomic impurity in |n0> coupled to one
/// empty hard-core bath orbital (energy eps) with normal coupling v and anomalous
/// coupling w. The two virtual states are |n0 - 1> (x) |1> (reached by v a^dag b) and
/// |n0 + 1> (x) |1> (reached by w a^dag b^dag).
double second_order_shift(double u, double mu, int n0, double eps, double v, double w);

/// Scalar Green's function of a non-interacting impurity level e0 hybridized with a
/// single bath level eps by coupling v: 1 / (i w - e0 - v^2 / (i w - eps)).
std::complex<double> two_site_green(double omega, double e0, double eps, double v);

}  // namespace ctsboson::oracles
