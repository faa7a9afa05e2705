#include "ctsboson/oracles.hpp"

#include <cmath>

namespace ctsboson::oracles {

namespace {
using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
}

ProjectedOperators project(double alpha, int n_c) {
  const int big = n_c + 40 + static_cast<int>(4.0 * alpha * alpha);
  const long double a = alpha;

  // unnormalized tail amplitudes alpha^n / sqrt(n!) for n >= n_c, via logs
  Eigen::Matrix<long double, Eigen::Dynamic, 1> tail = Eigen::Matrix<long double, Eigen::Dynamic, 1>::Zero(big);
  long double weight = 0.0L;
  for (int n = n_c; n < big; ++n) {
    const long double log_amp = n * std::log(a) - 0.5L * std::lgamma(static_cast<long double>(n) + 1.0L);
    tail[n] = std::exp(log_amp);
    weight += tail[n] * tail[n];
  }
  tail /= std::sqrt(weight);

  MatL basis = MatL::Zero(big, n_c + 1);
  for (int k = 0; k < n_c; ++k) basis(k, k) = 1.0L;
  basis.col(n_c) = tail;

  MatL b = MatL::Zero(big, big), n = MatL::Zero(big, big), nn = MatL::Zero(big, big);
  for (int k = 0; k < big; ++k) {
    if (k > 0) b(k - 1, k) = std::sqrt(static_cast<long double>(k));
    n(k, k) = k;
    nn(k, k) = static_cast<long double>(k) * (k - 1);
  }

  ProjectedOperators out;
  out.b = (basis.transpose() * b * basis).cast<double>();
  out.n = (basis.transpose() * n * basis).cast<double>();
  out.nn = (basis.transpose() * nn * basis).cast<double>();
  out.gram = (basis.transpose() * basis).cast<double>();
  out.norm_const = static_cast<double>(1.0L / std::sqrt(weight));
  return out;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double second_order_shift(double u, double mu, int n0, double eps, double v, double w) {
  auto atom = [&](int n) { return 0.5 * u * n * (n - 1.0) - mu * n; };
  double shift = 0.0;
  if (n0 > 0) shift -= v * v * n0 / (atom(n0 - 1) + eps - atom(n0));
  shift -= w * w * (n0 + 1.0) / (atom(n0 + 1) + eps - atom(n0));
  return shift;
}

std::complex<double> two_site_green(double omega, double e0, double eps, double v) {
  const std::complex<double> iw(0.0, omega);
  return 1.0 / (iw - e0 - v * v / (iw - eps));
}

}  // namespace ctsboson::oracles
