#include "ctsboson/gutzwiller.hpp"

#include "ctsboson/numerics.hpp"

#include <cmath>
#include <optional>

namespace ctsboson::gutzwiller {

double Config::alpha_upper() const {
  return alpha_max > 0.0 ? alpha_max : 2.0 * std::sqrt(double(scheme.n_c)) + 3.0;
}

void Config::validate() const {
  model.validate();
  scheme.validate();
  if (!(mixing > 0.0 && mixing <= 1.0)) throw InvalidInput("mixing must be in (0, 1]");
  if (!(tol_phi > 0.0)) throw InvalidInput("tol_phi must be positive");
  if (max_iter < 1) throw InvalidInput("max_iter must be >= 1");
  if (!(alpha_tol > 0.0)) throw InvalidInput("alpha_tol must be positive");
  if (!std::isfinite(phi_start)) throw InvalidInput("phi_start must be finite");
}

Eigen::MatrixXd local_hamiltonian(const OperatorSet& ops, const ModelParams& model, double phi) {
  return -model.zj() * phi * (ops.b + ops.b_dag) + 0.5 * model.u * ops.nn -
         model.mu_over_u * ops.n;
}

namespace {

Energies energies_in(const OperatorSet& ops, const Eigen::VectorXd& psi, double phi,
                     const ModelParams& m) {
  const double b_mean = psi.dot(ops.b * psi);
  const double local = 0.5 * m.u * psi.dot(ops.nn * psi) - m.mu_over_u * psi.dot(ops.n * psi);
  return {-2.0 * m.zj() * phi * b_mean + local, -m.zj() * b_mean * b_mean + local};
}

struct LocalState {
  Eigen::VectorXd psi;
  double b_mean = 0.0;
};

LocalState ground_state(const OperatorSet& ops, const ModelParams& model, double phi) {
  const auto eig = numerics::eigh(numerics::SymmetricMatrix(local_hamiltonian(ops, model, phi)));
  LocalState s;
  s.psi = eig.vectors.col(0);
  s.b_mean = s.psi.dot(ops.b * s.psi);
  return s;
}

Result run_seed(const OperatorSet& ops, const Config& config, double seed) {
  const auto fp = numerics::fixed_point(
      [&](std::span<const double> x) {
        return std::vector<double>{ground_state(ops, config.model, x[0]).b_mean};
      },
      {seed}, config.mixing, config.tol_phi, config.max_iter);

  const double phi = fp.x[0];
  const LocalState s = ground_state(ops, config.model, phi);
  Result r;
  r.n_mean = s.psi.dot(ops.n * s.psi);
  r.nn_mean = s.psi.dot(ops.nn * s.psi);
  const Energies e = energies_in(ops, s.psi, phi, config.model);
  r.e_paper = e.e_paper;
  r.e_site = e.e_site;
  r.phi = std::abs(s.b_mean);
  r.alpha_opt = config.scheme.is_cts() ? config.scheme.alpha : 0.0;
  r.iters = fp.iterations;
  r.converged = fp.converged;
  return r;
}

Result solve_with_ops(const OperatorSet& ops, const Config& config) {
  Result sf = run_seed(ops, config, config.phi_start);
  Result mott = run_seed(ops, config, 0.0);
  return mott.e_site <= sf.e_site ? mott : sf;
}

}  // namespace

Energies energy(const Eigen::VectorXd& psi, double phi, const Config& config) {
  const OperatorSet ops = build_operators(config.scheme);
  if (psi.size() != ops.dim) throw InvalidInput("coefficient vector does not match the basis");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidInput("coefficient vector is not normalized");
  return energies_in(ops, psi, phi, config.model);
}

Result solve_fixed_alpha(const Config& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Result r = solve_with_ops(build_operators(config.scheme), config);
  r.wall_time = std::chrono::steady_clock::now() - t0;
  return r;
}

Result solve(const Config& config) {
  config.validate();
  if (!config.scheme.is_cts()) return solve_fixed_alpha(config);

  const auto t0 = std::chrono::steady_clock::now();
  std::optional<Result> best;
  const auto objective = [&](double alpha) {
    Config c = config;
    c.scheme = config.scheme.with_alpha(alpha);
    Result r = solve_with_ops(build_operators(c.scheme), c);
    if (!best || r.e_site < best->e_site || (r.e_site == best->e_site && alpha < best->alpha_opt))
      best = r;
    return r.e_site;
  };
  numerics::minimize_scalar(objective, 0.0, config.alpha_upper(), config.alpha_tol);
  Result r = *best;
  r.wall_time = std::chrono::steady_clock::now() - t0;
  return r;
}

}  // namespace ctsboson::gutzwiller
