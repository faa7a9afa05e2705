#pragma once

// Parameter sweeps, Mott-boundary bisection and timing benchmarks over
// (mu/U, J/U, truncation scheme).

#include "ctsboson/bdmft.hpp"
#include "ctsboson/gutzwiller.hpp"
#include "ctsboson/records.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctsboson {

struct SweepSpec {
  Solver solver = Solver::Gutzwiller;
  std::vector<double> mu_list;
  std::vector<double> j_list;
  std::vector<TruncationScheme> schemes;
  int z = 6;
  // Solver settings; model and scheme are overwritten per grid point.
  gutzwiller::Config gutzwiller;
  bdmft::Config bdmft;
  bool warm_start = true;  // along increasing J within each (scheme, mu) chain
  int workers = 1;
  int repeats = 3;  // bench only

  void validate() const;
};

/// Inclusive grid lo, lo + step, ..., hi (hi kept when it lies within step/1e6 of the grid).
std::vector<double> j_grid(double lo, double hi, double step);

/// Cartesian product, sorted by (scheme kind, N_c, mu, J). A run that throws
/// becomes a converged=false row with NaN observables. Output is identical for
/// any worker count.
std::vector<ResultRecord> run_sweep(const SweepSpec& spec);

/// Order parameter of a single point, used as the Mott indicator.
double order_parameter(const SweepSpec& spec, const TruncationScheme& scheme, double mu, double j);

class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundaryResult {
  double j_c = 0.0;
  double j_lo = 0.0;  // last Mott point
  double j_hi = 0.0;  // last superfluid point
  int evaluations = 0;
};

inline constexpr double kMottThreshold = 1e-6;

/// Bisection on J of the indicator phi > 1e-6. Requires phi(j_lo) < 1e-6 < phi(j_hi);
/// throws BoundaryError naming the failing end otherwise. The solver, z and
/// solver settings come from `spec`; its lists are ignored.
BoundaryResult detect_mott_boundary(const SweepSpec& spec, const TruncationScheme& scheme,
                                    double mu, double j_lo, double j_hi, double tol_j = 1e-4);

struct BenchTable {
  std::vector<double> mu;  // one entry per row
  std::vector<double> j;
  std::vector<std::string> labels;           // one per scheme
  std::vector<std::vector<double>> time_ms;  // [scheme][row], median over repeats
  std::vector<std::vector<double>> speedup;  // [scheme][row], time(reference) / time(scheme)
  int reference = 0;                         // Fock scheme with the largest N_c

  [[nodiscard]] double median_speedup(int scheme) const;
};

/// Median wall-clock of identical cold starts per (scheme, mu, J); runs serially.
/// Throws InvalidInput unless repeats >= 3.
BenchTable bench(const SweepSpec& spec);

/// mu_over_u,j_over_u,time_ms_<label>...,speedup_<label>... (reference column omitted)
void write_bench_csv(std::ostream& out, const BenchTable& table);

}  // namespace ctsboson
