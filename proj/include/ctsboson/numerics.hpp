#pragma once

// Small dense kernels shared by the solvers: symmetric eigendecomposition,
// derivative-free minimization and damped fixed-point iteration.

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace ctsboson::numerics {

/// Real symmetric matrix. Construction symmetrizes the input as (A + A^T)/2
/// so that entries(i, j) == entries(j, i) holds exactly.
class SymmetricMatrix {
 public:
  static constexpr int kMaxDim = 1024;

  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Eigen::MatrixXd& a);

  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return m_; }
  [[nodiscard]] double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k belongs to values[k]
};

/// Full spectrum of a symmetric matrix, eigenvalues ascending.
/// Throws InvalidInput on non-finite entries.
EigenDecomposition eigh(const SymmetricMatrix& a);

/// Eigenvalues only (ascending); skips the eigenvector accumulation.
Eigen::VectorXd eigvalsh(const SymmetricMatrix& a);

struct ScalarMinimum {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

/// Brent minimization (golden section with parabolic steps) on [lo, hi].
/// The endpoints are evaluated as well and the best of the three candidates
/// is returned; on equal values the smaller abscissa wins.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double tol);

/// Evaluation budget of a pure golden-section search on [lo, hi] to tolerance tol.
int golden_section_budget(double lo, double hi, double tol);

struct MultiMinimum {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex descent with restarts from the incumbent.
/// `initial_step` (optional, one entry per coordinate) sets the edge lengths of
/// the starting simplex. Converged once every vertex lies within
/// tol * max(1, |x_best|_inf) of the best vertex and a restart does not move it.
MultiMinimum minimize_multi(const std::function<double(std::span<const double>)>& f,
                            std::vector<double> x0, double tol, int max_evals,
                            std::span<const double> initial_step = {});

struct FixedPointResult {
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
};

/// Damped iteration x <- (1 - mixing) x + mixing * map(x) until the update is
/// below tol in the infinity norm. Without convergence the iterate with the
/// smallest update is returned.
FixedPointResult fixed_point(
    const std::function<std::vector<double>(std::span<const double>)>& map,
    std::vector<double> x0, double mixing, double tol, int max_iter);

}  // namespace ctsboson::numerics
