#include "ctsboson/bdmft.hpp"

#include "ctsboson/errors.hpp"
#include "ctsboson/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace ctsboson::bdmft {

std::string AlphaScheme::label() const {
  switch (kind) {
    case Kind::MinimizeEAim: return "eaim";
    case Kind::MinimizeEtot: return "etot";
    case Kind::Fixed: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "fixed:%.12g", value);
      return buf;
    }
  }
  return "?";
}

AlphaScheme parse_alpha_scheme(const std::string& text) {
  if (text == "eaim") return AlphaScheme::minimize_e_aim();
  if (text == "etot") return AlphaScheme::minimize_e_tot();
  if (text.rfind("fixed:", 0) == 0) {
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(text.substr(6), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - 6 || !std::isfinite(a) || a < 0.0)
      throw InvalidInput("bad alpha scheme '" + text + "': fixed value must be a number >= 0");
    return AlphaScheme::fixed(a);
  }
  throw InvalidInput("bad alpha scheme '" + text + "' (expected eaim, etot or fixed:<value>)");
}

Seed cold_seed(int l_b, double phi_c) {
  Seed s;
  s.phi_c = phi_c;
  for (int l = 0; l < l_b; ++l) {
    s.eps.push_back(1.0 + l);
    s.v.push_back(0.1);
    s.w.push_back(0.01);
  }
  return s;
}

double Config::alpha_upper() const {
  return alpha_max > 0.0 ? alpha_max : 2.0 * std::sqrt(double(scheme.n_c)) + 3.0;
}

void Config::validate() const {
  model.validate();
  scheme.validate();
  if (l_b < 1 || l_b > impurity::kMaxBath) throw InvalidInput("l_b must be in [1, 4]");
  if (n_omega < 64) throw InvalidInput("n_omega must be >= 64");
  if (!(beta_fict > 0.0) || !std::isfinite(beta_fict)) throw InvalidInput("beta_fict must be > 0");
  if (!(mixing_delta > 0.0 && mixing_delta <= 1.0) || !(mixing_phi > 0.0 && mixing_phi <= 1.0))
    throw InvalidInput("mixing parameters must lie in (0, 1]");
  if (!(tol_phi > 0.0) || !(tol_delta > 0.0) || !(alpha_tol > 0.0) || !(alpha_tol_outer > 0.0))
    throw InvalidInput("tolerances must be > 0");
  if (max_sc_iter < 1) throw InvalidInput("max_sc_iter must be >= 1");
  if (alpha_scheme.kind == AlphaScheme::Kind::Fixed &&
      (!std::isfinite(alpha_scheme.value) || alpha_scheme.value < 0.0))
    throw InvalidInput("fixed alpha must be finite and >= 0");
  if (warm_start) {
    const auto& s = *warm_start;
    if (static_cast<int>(s.eps.size()) != l_b || s.v.size() != s.eps.size() ||
        s.w.size() != s.eps.size())
      throw InvalidInput("warm start bath does not have l_b orbitals");
  }
  // refuse oversized product spaces up front
  if (static_cast<long>(scheme.dim()) << l_b > numerics::SymmetricMatrix::kMaxDim)
    throw ConfigError("impurity Hilbert space exceeds the dense limit of 1024 states");
}

NambuGreen hybridization_from_bath(const AndersonParams& params, const MatsubaraGrid& grid) {
  params.validate();
  NambuGreen out;
  out.beta_fict = grid.beta;
  out.omegas = grid.omegas();
  out.g11.assign(grid.n, 0.0);
  out.g12.assign(grid.n, 0.0);
  for (int k = 0; k < grid.n; ++k) {
    const std::complex<double> iw(0.0, out.omegas[k]);
    for (int l = 0; l < params.l_b(); ++l) {
      const std::complex<double> up = 1.0 / (iw - params.eps[l]);
      const std::complex<double> down = 1.0 / (iw + params.eps[l]);
      out.g11[k] += params.v[l] * params.v[l] * up - params.w[l] * params.w[l] * down;
      out.g12[k] += params.v[l] * params.w[l] * (up - down);
    }
  }
  return out;
}

NambuGreen target_hybridization(const NambuGreen& g, double j, int z) {
  NambuGreen out = g;
  const double s = z * j * j;
  for (auto& x : out.g11) x *= s;
  for (auto& x : out.g12) x *= s;
  return out;
}

double weighted_distance2(const NambuGreen& a, const NambuGreen& b) {
  if (a.omegas.size() != b.omegas.size()) throw InvalidInput("Matsubara grids differ");
  double s = 0.0;
  for (std::size_t k = 0; k < a.omegas.size(); ++k)
    s += (std::norm(a.g11[k] - b.g11[k]) + std::norm(a.g12[k] - b.g12[k])) / a.omegas[k];
  return s;
}

double weighted_norm2(const NambuGreen& a) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.omegas.size(); ++k)
    s += (std::norm(a.g11[k]) + std::norm(a.g12[k])) / a.omegas[k];
  return s;
}

namespace {

double relative_distance(const NambuGreen& a, const NambuGreen& ref) {
  const double d = weighted_distance2(a, ref);
  const double n = weighted_norm2(ref);
  return n > 1e-30 ? std::sqrt(d / n) : std::sqrt(d);
}

// bath parameters are confined to |e| <= kEpsMax, |v|, |w| <= kCouplingMax
constexpr double kEpsMax = 1e4;
constexpr double kCouplingMax = 1e2;

// x = (e_0.., v_0.., w_0..) with eps_l = kEpsMin + |e_l|
struct FitProblem {
  int l_b;
  std::vector<double> omega, weight, t11r, t11i, t12r, t12i;

  FitProblem(const NambuGreen& target, int lb) : l_b(lb) {
    const std::size_t n = target.omegas.size();
    omega = target.omegas;
    weight.resize(n);
    t11r.resize(n);
    t11i.resize(n);
    t12r.resize(n);
    t12i.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      weight[k] = 1.0 / omega[k];
      t11r[k] = target.g11[k].real();
      t11i[k] = target.g11[k].imag();
      t12r[k] = target.g12[k].real();
      t12i[k] = target.g12[k].imag();
    }
  }

  // Delta11 = sum [-eps (V^2 + W^2) - i w (V^2 - W^2)] / (eps^2 + w^2), Delta12 = sum -2 eps V W / (eps^2 + w^2)
  double chi2(std::span<const double> x) const {
    for (int l = 0; l < l_b; ++l)
      if (!(std::abs(x[l]) <= kEpsMax && std::abs(x[l_b + l]) <= kCouplingMax &&
            std::abs(x[2 * l_b + l]) <= kCouplingMax))
        return std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
      const double w2 = omega[k] * omega[k];
      double r11 = 0.0, i11 = 0.0, r12 = 0.0;
      for (int l = 0; l < l_b; ++l) {
        const double e = impurity::kEpsMin + std::abs(x[l]);
        const double v = x[l_b + l], w = x[2 * l_b + l];
        const double inv = 1.0 / (e * e + w2);
        r11 -= e * (v * v + w * w) * inv;
        i11 -= omega[k] * (v * v - w * w) * inv;
        r12 -= 2.0 * e * v * w * inv;
      }
      const double d1 = r11 - t11r[k], d2 = i11 - t11i[k], d3 = r12 - t12r[k];
      s += weight[k] * (d1 * d1 + d2 * d2 + d3 * d3 + t12i[k] * t12i[k]);
    }
    return s;
  }
};

std::vector<double> pack(const std::vector<double>& eps, const std::vector<double>& v,
                         const std::vector<double>& w) {
  std::vector<double> x;
  for (double e : eps) x.push_back(std::clamp(e - impurity::kEpsMin, 0.0, kEpsMax));
  for (double c : v) x.push_back(std::clamp(c, -kCouplingMax, kCouplingMax));
  for (double c : w) x.push_back(std::clamp(c, -kCouplingMax, kCouplingMax));
  return x;
}

void unpack(std::span<const double> x, int l_b, AndersonParams& p) {
  p.eps.resize(l_b);
  p.v.resize(l_b);
  p.w.resize(l_b);
  for (int l = 0; l < l_b; ++l) {
    p.eps[l] = impurity::kEpsMin + std::abs(x[l]);
    p.v[l] = x[l_b + l];
    p.w[l] = x[2 * l_b + l];
  }
}

void canonicalize(AndersonParams& p) {
  const int l_b = p.l_b();
  for (int l = 0; l < l_b; ++l) {
    if (p.v[l] < 0.0 || (p.v[l] == 0.0 && p.w[l] < 0.0)) {
      p.v[l] = -p.v[l];
      p.w[l] = -p.w[l];
    }
    if (p.v[l] == 0.0) p.v[l] = 0.0;  // drop negative zero
    if (p.w[l] == 0.0) p.w[l] = 0.0;
  }
  std::vector<int> order(l_b);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (p.eps[a] != p.eps[b]) return p.eps[a] < p.eps[b];
    if (p.v[a] != p.v[b]) return p.v[a] < p.v[b];
    return p.w[a] < p.w[b];
  });
  AndersonParams q = p;
  for (int l = 0; l < l_b; ++l) {
    q.eps[l] = p.eps[order[l]];
    q.v[l] = p.v[order[l]];
    q.w[l] = p.w[order[l]];
  }
  p = q;
}

constexpr double kFitTol = 1e-10;
constexpr int kFitMaxEvals = 20000;

}  // namespace

FitResult fit_bath(const NambuGreen& target, int l_b, const AndersonParams& init) {
  if (l_b < 1 || l_b > impurity::kMaxBath) throw InvalidInput("l_b must be in [1, 4]");
  if (init.l_b() != l_b) throw InvalidInput("initial bath does not have l_b orbitals");
  init.validate();
  if (target.omegas.empty()) throw InvalidInput("empty Matsubara grid");

  const FitProblem prob(target, l_b);
  const auto f = [&](std::span<const double> x) { return prob.chi2(x); };

  std::vector<std::vector<double>> starts;
  starts.push_back(pack(init.eps, init.v, init.w));
  {
    std::vector<double> e = init.eps;
    for (auto& x : e) x *= 1.5;
    starts.push_back(pack(e, init.v, init.w));
  }
  {
    std::vector<double> e = init.eps, v = init.v, w = init.w;
    for (auto& x : e) x *= 0.6;
    for (auto& x : v) x = 1.2 * x + 0.02;
    for (auto& x : w) x *= 0.8;
    starts.push_back(pack(e, v, w));
  }
  starts.push_back(pack(init.eps, init.w, init.v));

  numerics::MultiMinimum best;
  best.f = std::numeric_limits<double>::infinity();
  for (const auto& x0 : starts) {
    auto m = numerics::minimize_multi(f, x0, kFitTol, kFitMaxEvals);
    if (m.f < best.f) best = std::move(m);
  }

  FitResult out;
  out.params = init;
  unpack(best.x, l_b, out.params);
  canonicalize(out.params);
  out.chi2 = best.f;
  out.poor_fit = out.chi2 > 1e-2 * weighted_norm2(target);
  return out;
}

Observables observables(const impurity::EDResult& ed, const AndersonParams& params) {
  const ModelParams& m = params.model;
  Observables o;
  o.e_kin_con = 0.5 * ed.h_hyb_mean;
  o.g_c0 = m.zj() > 0.0 ? ed.h_hyb_mean / (2.0 * m.zj()) : 0.0;
  o.e_tot_site = 0.5 * m.u * ed.nn_mean - m.mu_over_u * ed.n_mean -
                 m.zj() * ed.b_signed * params.phi_c + o.e_kin_con;
  return o;
}

namespace {

struct Run {
  Result result;
  numerics::EigenDecomposition eig;
  impurity::ProductSpace space;
};

double alpha_for_iteration(const Config& c, const AndersonParams& p, double previous) {
  if (!c.scheme.is_cts()) return 0.0;
  switch (c.alpha_scheme.kind) {
    case AlphaScheme::Kind::Fixed: return c.alpha_scheme.value;
    case AlphaScheme::Kind::MinimizeEtot: return previous;
    case AlphaScheme::Kind::MinimizeEAim: break;
  }
  const auto e = [&](double a) { return impurity::ground_energy(p, c.scheme.with_alpha(a)); };
  return numerics::minimize_scalar(e, 0.0, c.alpha_upper(), c.alpha_tol).x;
}

Run run_from(const Config& c, const Seed& seed, double alpha0) {
  const MatsubaraGrid grid = c.grid();
  AndersonParams p;
  p.model = c.model;
  p.phi_c = seed.phi_c;
  p.eps = seed.eps;
  p.v = seed.v;
  p.w = seed.w;
  for (auto& e : p.eps) e = std::max(e, impurity::kEpsMin);
  canonicalize(p);

  NambuGreen delta_fit = hybridization_from_bath(p, grid);
  double alpha = alpha0;
  double b_signed = 0.0;
  Run run;
  Result& r = run.result;

  for (int it = 1; it <= c.max_sc_iter; ++it) {
    alpha = alpha_for_iteration(c, p, alpha);
    const TruncationScheme scheme = c.scheme.is_cts() ? c.scheme.with_alpha(alpha) : c.scheme;
    const auto ops = build_operators(scheme);
    auto space = impurity::lift(ops, p.l_b());
    auto sol = impurity::ground_observables(impurity::build_aim_hamiltonian(p, scheme), p, scheme);
    const NambuGreen g = impurity::lehmann_green(sol.eig, space, sol.result.b_signed, grid);
    const NambuGreen target = target_hybridization(g, c.model.j_over_u, c.model.z);

    NambuGreen mixed = target;
    for (std::size_t k = 0; k < mixed.g11.size(); ++k) {
      mixed.g11[k] = (1.0 - c.mixing_delta) * delta_fit.g11[k] + c.mixing_delta * target.g11[k];
      mixed.g12[k] = (1.0 - c.mixing_delta) * delta_fit.g12[k] + c.mixing_delta * target.g12[k];
    }
    const FitResult fit = fit_bath(mixed, p.l_b(), p);
    const NambuGreen new_fit = hybridization_from_bath(fit.params, grid);

    const Observables o = observables(sol.result, p);
    r.phi = sol.result.phi;
    r.n_mean = sol.result.n_mean;
    r.nn_mean = sol.result.nn_mean;
    r.alpha_opt = scheme.is_cts() ? alpha : 0.0;
    r.e_tot_site = o.e_tot_site;
    r.e_kin_con = o.e_kin_con;
    r.g_c0 = o.g_c0;
    r.e_aim = sol.result.e_aim;
    r.bath = p;
    r.iters = it;
    r.phi_residual = std::abs(sol.result.b_signed - p.phi_c);
    r.delta_change = relative_distance(new_fit, delta_fit);
    r.fit_residual = relative_distance(delta_fit, target);
    r.poor_fit = fit.poor_fit;
    r.degenerate_ground = g.degenerate_ground;
    b_signed = sol.result.b_signed;
    run.eig = std::move(sol.eig);
    run.space = std::move(space);

    const double phi_next = (1.0 - c.mixing_phi) * p.phi_c + c.mixing_phi * sol.result.b_signed;
    const double dphi = std::abs(phi_next - p.phi_c);
    p.eps = fit.params.eps;
    p.v = fit.params.v;
    p.w = fit.params.w;
    p.phi_c = phi_next;
    delta_fit = new_fit;
    if (dphi < c.tol_phi && r.delta_change < c.tol_delta) {
      r.converged = true;
      break;
    }
  }
  r.mott_stability = c.model.zj() * impurity::static_susceptibility(run.eig, run.space, b_signed);
  return run;
}

constexpr double kMottPhi = 1e-6;
constexpr double kEnergyTie = 1e-10;

// Picks between the superfluid-seeded and the phi_C = 0 seeded runs. A phi = 0
// solution whose linearized condensate map has gain J z chi > 1 is a repeller
// of the physical iteration and is discarded.
Result select(Run sf, Run mott) {
  const Result& a = sf.result;
  const Result& b = mott.result;
  if (b.phi < kMottPhi && b.mott_stability > 1.0) return a;
  if (a.converged != b.converged) return a.converged ? a : b;
  if (b.e_tot_site <= a.e_tot_site + kEnergyTie) return b;
  return a;
}

Result loop_impl(const Config& c, double alpha0) {
  const Seed sf_seed = c.warm_start ? *c.warm_start : cold_seed(c.l_b, 0.5);
  Run sf = run_from(c, sf_seed, alpha0);
  Run mott = run_from(c, cold_seed(c.l_b, 0.0), alpha0);
  return select(std::move(sf), std::move(mott));
}

}  // namespace

Result self_consistency_loop(const Config& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const double alpha0 =
      config.alpha_scheme.kind == AlphaScheme::Kind::Fixed ? config.alpha_scheme.value : 0.0;
  Result r = loop_impl(config, alpha0);
  r.wall_time = std::chrono::steady_clock::now() - t0;
  return r;
}

Result optimize_alpha_outer(const Config& config) {
  config.validate();
  if (config.alpha_scheme.kind != AlphaScheme::Kind::MinimizeEtot)
    throw InvalidInput("optimize_alpha_outer requires alpha_scheme = etot");
  const auto t0 = std::chrono::steady_clock::now();
  if (!config.scheme.is_cts()) {
    Result r = loop_impl(config, 0.0);
    r.wall_time = std::chrono::steady_clock::now() - t0;
    return r;
  }

  std::optional<Result> best, last;
  int total_iters = 0;
  Config inner = config;
  const auto objective = [&](double a) {
    inner.alpha_scheme = AlphaScheme::fixed(a);
    Result r = loop_impl(inner, a);
    total_iters += r.iters;
    last = r;
    if (!r.converged) return std::numeric_limits<double>::infinity();
    if (!best || r.e_tot_site < best->e_tot_site ||
        (r.e_tot_site == best->e_tot_site && a < best->alpha_opt))
      best = r;
    return r.e_tot_site;
  };
  numerics::minimize_scalar(objective, 0.0, config.alpha_upper(), config.alpha_tol_outer);
  Result r = best ? *best : *last;
  r.iters = total_iters;
  r.wall_time = std::chrono::steady_clock::now() - t0;
  return r;
}

Result solve(const Config& config) {
  if (config.alpha_scheme.kind == AlphaScheme::Kind::MinimizeEtot)
    return optimize_alpha_outer(config);
  return self_consistency_loop(config);
}

}  // namespace ctsboson::bdmft
