#include "ctsboson/sweep.hpp"

#include "ctsboson/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <thread>
#include <tuple>

namespace ctsboson {

void SweepSpec::validate() const {
  if (mu_list.empty()) throw InvalidInput("mu list is empty");
  if (j_list.empty()) throw InvalidInput("J list is empty");
  if (schemes.empty()) throw InvalidInput("scheme list is empty");
  for (double mu : mu_list)
    if (!std::isfinite(mu)) throw InvalidInput("mu/U values must be finite");
  for (double j : j_list)
    if (!std::isfinite(j) || j < 0.0) throw InvalidInput("J/U values must be finite and >= 0");
  for (const auto& s : schemes) s.validate();
  if (z < 1) throw InvalidInput("z must be >= 1");
  if (workers < 1) throw InvalidInput("workers must be >= 1");
  if (repeats < 1) throw InvalidInput("repeats must be >= 1");
}

std::vector<double> j_grid(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step))
    throw InvalidInput("J grid bounds must be finite");
  if (hi < lo) throw InvalidInput("J grid: j-max < j-min");
  if (!(step > 0.0)) throw InvalidInput("J grid: step must be > 0");
  std::vector<double> out;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-6));
  if (n > 1000000) throw InvalidInput("J grid has too many points");
  for (long k = 0; k <= n; ++k) out.push_back(lo + k * step);
  return out;
}

namespace {

struct PointState {
  bool converged = false;
  double phi = 0.0;
  bdmft::Seed seed;
};

gutzwiller::Config gutzwiller_config(const SweepSpec& spec, const TruncationScheme& s, double mu,
                                     double j) {
  gutzwiller::Config c = spec.gutzwiller;
  c.model = {j, mu, spec.z, spec.gutzwiller.model.u};
  c.scheme = s;
  return c;
}

bdmft::Config bdmft_config(const SweepSpec& spec, const TruncationScheme& s, double mu, double j) {
  bdmft::Config c = spec.bdmft;
  c.model = {j, mu, spec.z, spec.bdmft.model.u};
  c.scheme = s;
  return c;
}

ResultRecord run_point(const SweepSpec& spec, const TruncationScheme& s, double mu, double j,
                       const std::optional<PointState>& warm, PointState& state) {
  state = PointState{};
  if (spec.solver == Solver::Gutzwiller) {
    auto c = gutzwiller_config(spec, s, mu, j);
    if (warm && warm->converged && warm->phi > kMottThreshold) c.phi_start = warm->phi;
    const auto r = gutzwiller::solve(c);
    state.converged = r.converged;
    state.phi = r.phi;
    return make_record(c, r);
  }
  auto c = bdmft_config(spec, s, mu, j);
  if (warm && warm->converged) c.warm_start = warm->seed;
  const auto r = bdmft::solve(c);
  state.converged = r.converged;
  state.phi = r.phi;
  state.seed = {r.bath.phi_c, r.bath.eps, r.bath.v, r.bath.w};
  return make_record(c, r);
}

ResultRecord safe_point(const SweepSpec& spec, const TruncationScheme& s, double mu, double j,
                        const std::optional<PointState>& warm, PointState& state) {
  try {
    return run_point(spec, s, mu, j, warm, state);
  } catch (const std::exception&) {
    state = PointState{};
    const int l_bath = spec.solver == Solver::Bdmft ? spec.bdmft.l_b : 0;
    return failed_record(spec.solver, s, mu, j, spec.z, l_bath);
  }
}

auto sort_key(const ResultRecord& r) {
  return std::make_tuple(static_cast<int>(r.scheme_kind), r.n_c, r.mu_over_u, r.j_over_u);
}

}  // namespace

std::vector<ResultRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();
  if (spec.solver == Solver::Gutzwiller) {
    gutzwiller_config(spec, spec.schemes[0], spec.mu_list[0], spec.j_list[0]).validate();
  } else {
    bdmft_config(spec, spec.schemes[0], spec.mu_list[0], spec.j_list[0]).validate();
  }

  std::vector<double> js = spec.j_list;
  std::sort(js.begin(), js.end());
  struct Chain {
    TruncationScheme scheme;
    double mu;
    std::vector<ResultRecord> rows;
  };
  std::vector<Chain> chains;
  for (const auto& s : spec.schemes)
    for (double mu : spec.mu_list) chains.push_back({s, mu, {}});

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < chains.size(); i = next++) {
      Chain& ch = chains[i];
      std::optional<PointState> warm;
      for (double j : js) {
        PointState st;
        ch.rows.push_back(safe_point(spec, ch.scheme, ch.mu, j, warm, st));
        if (spec.warm_start) warm = st;
      }
    }
  };
  const int n_threads = std::min<int>(spec.workers, static_cast<int>(chains.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<ResultRecord> out;
  for (auto& ch : chains) out.insert(out.end(), ch.rows.begin(), ch.rows.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });
  return out;
}

double order_parameter(const SweepSpec& spec, const TruncationScheme& scheme, double mu, double j) {
  PointState st;
  return run_point(spec, scheme, mu, j, std::nullopt, st).phi;
}

BoundaryResult detect_mott_boundary(const SweepSpec& spec, const TruncationScheme& scheme,
                                    double mu, double j_lo, double j_hi, double tol_j) {
  if (!std::isfinite(j_lo) || !std::isfinite(j_hi) || j_lo < 0.0 || !(j_hi > j_lo))
    throw InvalidInput("boundary bracket must satisfy 0 <= j_lo < j_hi");
  if (!(tol_j > 0.0)) throw InvalidInput("tol_j must be > 0");
  scheme.validate();

  BoundaryResult r;
  const auto phi = [&](double j) {
    ++r.evaluations;
    return order_parameter(spec, scheme, mu, j);
  };
  char buf[160];
  const double p_lo = phi(j_lo);
  if (!(p_lo < kMottThreshold)) {
    std::snprintf(buf, sizeof buf, "lower bracket end J/U = %.6g is not Mott (phi = %.3g)", j_lo, p_lo);
    throw BoundaryError(buf);
  }
  const double p_hi = phi(j_hi);
  if (!(p_hi > kMottThreshold)) {
    std::snprintf(buf, sizeof buf, "upper bracket end J/U = %.6g is not superfluid (phi = %.3g)", j_hi,
                  p_hi);
    throw BoundaryError(buf);
  }
  double lo = j_lo, hi = j_hi;
  while (hi - lo > tol_j) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > kMottThreshold ? hi : lo) = mid;
  }
  r.j_lo = lo;
  r.j_hi = hi;
  r.j_c = 0.5 * (lo + hi);
  return r;
}

double BenchTable::median_speedup(int scheme) const {
  std::vector<double> s = speedup.at(scheme);
  if (s.empty()) return 0.0;
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

BenchTable bench(const SweepSpec& spec) {
  spec.validate();
  if (spec.repeats < 3) throw InvalidInput("bench needs repeats >= 3");

  BenchTable t;
  t.reference = -1;
  for (std::size_t k = 0; k < spec.schemes.size(); ++k) {
    const auto& s = spec.schemes[k];
    t.labels.push_back(s.label());
    if (!s.is_cts() && (t.reference < 0 || s.n_c > spec.schemes[t.reference].n_c))
      t.reference = static_cast<int>(k);
  }
  if (t.reference < 0) t.reference = 0;
  t.time_ms.resize(spec.schemes.size());
  t.speedup.resize(spec.schemes.size());

  for (double mu : spec.mu_list) {
    for (double j : spec.j_list) {
      t.mu.push_back(mu);
      t.j.push_back(j);
      for (std::size_t k = 0; k < spec.schemes.size(); ++k) {
        std::vector<double> times;
        for (int rep = 0; rep < spec.repeats; ++rep) {
          PointState st;
          const auto t0 = std::chrono::steady_clock::now();
          run_point(spec, spec.schemes[k], mu, j, std::nullopt, st);
          times.push_back(
              std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
        }
        std::sort(times.begin(), times.end());
        const std::size_t n = times.size();
        t.time_ms[k].push_back(n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]));
      }
      for (std::size_t k = 0; k < spec.schemes.size(); ++k)
        t.speedup[k].push_back(t.time_ms[t.reference].back() / t.time_ms[k].back());
    }
  }
  return t;
}

void write_bench_csv(std::ostream& out, const BenchTable& t) {
  out << "mu_over_u,j_over_u";
  for (const auto& l : t.labels) out << ",time_ms_" << l;
  for (std::size_t k = 0; k < t.labels.size(); ++k)
    if (static_cast<int>(k) != t.reference) out << ",speedup_" << t.labels[k];
  out << '\n';
  for (std::size_t row = 0; row < t.j.size(); ++row) {
    out << format_real(t.mu[row]) << ',' << format_real(t.j[row]);
    for (const auto& col : t.time_ms) out << ',' << format_real(col[row]);
    for (std::size_t k = 0; k < t.labels.size(); ++k)
      if (static_cast<int>(k) != t.reference) out << ',' << format_real(t.speedup[k][row]);
    out << '\n';
  }
}

}  // namespace ctsboson
