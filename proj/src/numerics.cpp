#include "ctsboson/numerics.hpp"

#include "ctsboson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ctsboson::numerics {

namespace {

constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt(5)) / 2

void require_finite(const Eigen::MatrixXd& a) {
  if (!a.allFinite()) throw InvalidInput("symmetric matrix has non-finite entries");
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw InvalidInput("symmetric matrix must be square and non-empty");
  if (a.rows() > kMaxDim)
    throw ConfigError("matrix dimension " + std::to_string(a.rows()) + " exceeds " +
                      std::to_string(kMaxDim));
  m_ = 0.5 * (a + a.transpose());
}

EigenDecomposition eigh(const SymmetricMatrix& a) {
  require_finite(a.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw InvalidInput("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd eigvalsh(const SymmetricMatrix& a) {
  require_finite(a.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvalidInput("eigendecomposition failed");
  return solver.eigenvalues();
}

int golden_section_budget(double lo, double hi, double tol) {
  return static_cast<int>(std::ceil(std::log((hi - lo) / tol) / std::log(1.618))) + 20;
}

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double tol) {
  if (!(tol > 0.0)) throw InvalidInput("minimize_scalar: tol must be positive");
  if (!(lo < hi)) throw InvalidInput("minimize_scalar: requires lo < hi");

  const int budget = golden_section_budget(lo, hi, tol);
  int evals = 0;
  auto eval = [&](double x) {
    ++evals;
    return f(x);
  };

  // Brent's method, after the classic fmin routine.
  double a = lo;
  double b = hi;
  double v = a + kGolden * (b - a);
  double w = v;
  double x = v;
  double e = 0.0;
  double d = 0.0;
  double fx = eval(x);
  double fv = fx;
  double fw = fx;
  const double rel = 1e-12;

  while (evals < budget) {
    const double xm = 0.5 * (a + b);
    const double tol1 = rel * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;

    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (xm >= x) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm) ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = eval(u);
    if (fu <= fx) {
      if (u >= x)
        a = x;
      else
        b = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }

  ScalarMinimum best{x, fx, 0};
  const double flo = eval(lo);
  if (flo <= best.f) best = {lo, flo, 0};
  const double fhi = eval(hi);
  if (fhi < best.f) best = {hi, fhi, 0};
  best.evaluations = evals;
  return best;
}

namespace {

struct Simplex {
  std::vector<std::vector<double>> points;
  std::vector<double> values;
};

double inf_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

MultiMinimum minimize_multi(const std::function<double(std::span<const double>)>& f,
                            std::vector<double> x0, double tol, int max_evals,
                            std::span<const double> initial_step) {
  if (x0.empty()) throw InvalidInput("minimize_multi: empty start point");
  if (!(tol > 0.0)) throw InvalidInput("minimize_multi: tol must be positive");
  if (!initial_step.empty() && initial_step.size() != x0.size())
    throw InvalidInput("minimize_multi: initial_step size mismatch");

  const std::size_t n = x0.size();
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  MultiMinimum best{x0, eval(x0), 0, false};
  if (!std::isfinite(best.f)) throw InvalidInput("minimize_multi: f not finite at x0");

  auto step_for = [&](std::size_t i, const std::vector<double>& at) {
    if (!initial_step.empty()) return initial_step[i];
    return at[i] != 0.0 ? 0.05 * at[i] : 0.00025;
  };

  constexpr int kMaxRestarts = 8;
  for (int restart = 0; restart <= kMaxRestarts && evals < max_evals; ++restart) {
    const std::vector<double> start = best.x;
    Simplex s;
    s.points.push_back(start);
    s.values.push_back(best.f);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> p = start;
      p[i] += step_for(i, start);
      s.values.push_back(eval(p));
      s.points.push_back(std::move(p));
    }

    std::vector<std::size_t> order(n + 1);
    bool inner_converged = false;
    while (evals < max_evals) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
      const auto& xb = s.points[order[0]];
      double spread = 0.0;
      for (std::size_t k = 1; k <= n; ++k)
        spread = std::max(spread, inf_norm_diff(s.points[order[k]], xb));
      double scale = 1.0;
      for (double c : xb) scale = std::max(scale, std::abs(c));
      if (spread <= tol * scale) {
        inner_converged = true;
        break;
      }

      const std::size_t iw = order[n];
      const std::size_t is = order[n - 1];
      std::vector<double> centroid(n, 0.0);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += s.points[order[k]][i] / double(n);

      auto along = [&](double t) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i)
          p[i] = centroid[i] + t * (s.points[iw][i] - centroid[i]);
        return p;
      };

      auto xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < s.values[order[0]]) {
        auto xe = along(-2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          s.points[iw] = std::move(xe);
          s.values[iw] = fe;
        } else {
          s.points[iw] = std::move(xr);
          s.values[iw] = fr;
        }
        continue;
      }
      if (fr < s.values[is]) {
        s.points[iw] = std::move(xr);
        s.values[iw] = fr;
        continue;
      }
      const bool outside = fr < s.values[iw];
      auto xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : s.values[iw])) {
        s.points[iw] = std::move(xc);
        s.values[iw] = fc;
        continue;
      }
      const auto anchor = s.points[order[0]];
      for (std::size_t k = 1; k <= n; ++k) {
        auto& p = s.points[order[k]];
        for (std::size_t i = 0; i < n; ++i) p[i] = anchor[i] + 0.5 * (p[i] - anchor[i]);
        s.values[order[k]] = eval(p);
      }
    }

    std::size_t ib = 0;
    for (std::size_t k = 1; k <= n; ++k)
      if (s.values[k] < s.values[ib]) ib = k;
    const double moved = inf_norm_diff(s.points[ib], best.x);
    if (s.values[ib] < best.f) {
      best.x = s.points[ib];
      best.f = s.values[ib];
    }
    double scale = 1.0;
    for (double c : best.x) scale = std::max(scale, std::abs(c));
    if (inner_converged && moved <= tol * scale) {
      best.converged = true;
      break;
    }
  }
  best.evaluations = evals;
  return best;
}

FixedPointResult fixed_point(
    const std::function<std::vector<double>(std::span<const double>)>& map,
    std::vector<double> x0, double mixing, double tol, int max_iter) {
  if (!(mixing > 0.0 && mixing <= 1.0)) throw InvalidInput("fixed_point: mixing must be in (0,1]");
  if (!(tol > 0.0)) throw InvalidInput("fixed_point: tol must be positive");

  std::vector<double> x = std::move(x0);
  std::vector<double> best = x;
  double best_step = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    const std::vector<double> mx = map(x);
    if (mx.size() != x.size()) throw InvalidInput("fixed_point: map changed the dimension");
    std::vector<double> next(x.size());
    double step = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      next[i] = (1.0 - mixing) * x[i] + mixing * mx[i];
      step = std::max(step, std::abs(next[i] - x[i]));
    }
    if (!std::isfinite(step)) break;
    if (step < best_step) {
      best_step = step;
      best = next;
    }
    x = std::move(next);
    if (step < tol) return {x, it, true};
  }
  return {best, max_iter, false};
}

}  // namespace ctsboson::numerics
