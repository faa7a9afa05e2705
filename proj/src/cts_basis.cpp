#include "ctsboson/cts_basis.hpp"

#include "ctsboson/errors.hpp"

#include <cmath>
#include <limits>

namespace ctsboson {

std::string TruncationScheme::label() const {
  return (is_cts() ? "cts" : "fock") + std::to_string(n_c);
}

void TruncationScheme::validate() const {
  if (is_cts()) {
    if (n_c < 2) throw InvalidInput("tail-state basis needs n_c >= 2");
    if (!std::isfinite(alpha) || alpha < 0.0)
      throw InvalidInput("tail-state alpha must be finite and >= 0");
  } else if (n_c < 1) {
    throw InvalidInput("Fock basis needs n_c >= 1");
  }
}

TruncationScheme parse_scheme(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidInput("scheme must look like fock:<N> or cts:<N>");
  const std::string kind = text.substr(0, colon);
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw InvalidInput("trailing characters");
  } catch (const std::exception&) {
    throw InvalidInput("bad cutoff in scheme '" + text + "'");
  }
  TruncationScheme s;
  if (kind == "fock")
    s = TruncationScheme::fock(n);
  else if (kind == "cts")
    s = TruncationScheme::cts(n);
  else
    throw InvalidInput("unknown scheme kind '" + kind + "'");
  s.validate();
  return s;
}

double cts_tail_ratio(double alpha, int n_c) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be finite and >= 0");
  if (n_c < 0) throw InvalidInput("n_c must be >= 0");
  const double a2 = alpha * alpha;
  const int cap = static_cast<int>(10.0 * (n_c + a2 + 20.0));
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= cap; ++k) {
    term *= a2 / double(n_c + k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double cts_norm_const(double alpha, int n_c) {
  if (!(alpha >= 0.0)) throw InvalidInput("alpha must be >= 0");
  if (n_c < 0) throw InvalidInput("n_c must be >= 0");
  if (alpha == 0.0) return n_c == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  // log of sum_{n >= n_c} alpha^{2n}/n! = 2 n_c log(alpha) - log(n_c!) + log(R)
  const double log_tail =
      2.0 * n_c * std::log(alpha) - std::lgamma(n_c + 1.0) + std::log(cts_tail_ratio(alpha, n_c));
  return std::exp(-0.5 * log_tail);
}

CtsMoments cts_moments(double alpha, int n_c) {
  if (n_c < 2) throw InvalidInput("cts_moments needs n_c >= 2");
  if (!(alpha >= 0.0)) throw InvalidInput("alpha must be >= 0");
  const double r = cts_tail_ratio(alpha, n_c);
  const double a2 = alpha * alpha;
  // c^2 alpha^{2 N_c} / (N_c - k)! = N_c! / ((N_c - k)! R)
  const double nc = n_c;
  return {a2 + nc / r, a2 * a2 + (nc * (nc - 1.0) + a2 * nc) / r};
}

OperatorSet build_operators(const TruncationScheme& scheme) {
  scheme.validate();
  const int d = scheme.dim();
  OperatorSet ops;
  ops.dim = d;
  ops.b = Eigen::MatrixXd::Zero(d, d);
  ops.n = Eigen::MatrixXd::Zero(d, d);
  ops.nn = Eigen::MatrixXd::Zero(d, d);

  for (int k = 1; k < scheme.n_c; ++k) ops.b(k - 1, k) = std::sqrt(double(k));
  for (int k = 0; k < scheme.n_c; ++k) {
    ops.n(k, k) = k;
    ops.nn(k, k) = double(k) * (k - 1.0);
  }

  if (scheme.is_cts()) {
    const int t = scheme.n_c;  // index of the tail state
    const double alpha = scheme.alpha;
    if (alpha == 0.0) {
      // the tail state is exactly |N_c>
      ops.b(t - 1, t) = std::sqrt(double(t));
      ops.n(t, t) = t;
      ops.nn(t, t) = double(t) * (t - 1.0);
      ops.norm_const = std::numeric_limits<double>::infinity();
    } else {
      const double r = cts_tail_ratio(alpha, t);
      ops.b(t - 1, t) = std::sqrt(t / r);
      ops.b(t, t) = alpha;
      const CtsMoments m = cts_moments(alpha, t);
      ops.n(t, t) = m.n_mean;
      ops.nn(t, t) = m.nn_mean;
      ops.norm_const = cts_norm_const(alpha, t);
    }
  }
  ops.b_dag = ops.b.transpose();
  return ops;
}

double b_leakage_residual(const OperatorSet& ops, const TruncationScheme& scheme) {
  if (!scheme.is_cts()) return 0.0;
  const int t = scheme.n_c;
  return std::abs(ops.n(t, t) - ops.b.col(t).squaredNorm());
}

}  // namespace ctsboson
