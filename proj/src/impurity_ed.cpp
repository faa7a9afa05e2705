#include "ctsboson/impurity_ed.hpp"

#include "ctsboson/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ctsboson::impurity {

namespace {

// kron(A, B) with A's zeros skipped
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::Index m = a.rows(), k = b.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m * k, m * k);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i)
      if (a(i, j) != 0.0) out.block(i * k, j * k, k, k) = a(i, j) * b;
  return out;
}

// hard-core annihilator of orbital l on {0,1}^l_b
Eigen::MatrixXd bath_annihilator(int l, int l_b) {
  const int d = 1 << l_b;
  const int bit = 1 << (l_b - 1 - l);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int s = 0; s < d; ++s)
    if (s & bit) a(s ^ bit, s) = 1.0;
  return a;
}

void check_dim(int imp_dim, int l_b) {
  const long dim = static_cast<long>(imp_dim) << l_b;
  if (dim > numerics::SymmetricMatrix::kMaxDim)
    throw ConfigError("impurity Hilbert space of dimension " + std::to_string(dim) +
                      " exceeds the dense limit " +
                      std::to_string(numerics::SymmetricMatrix::kMaxDim));
}

}  // namespace

void AndersonParams::validate() const {
  model.validate();
  if (eps.size() != v.size() || eps.size() != w.size())
    throw InvalidInput("bath arrays eps, v, w must have equal length");
  if (l_b() < 1 || l_b() > kMaxBath) throw InvalidInput("bath orbital count must be in [1, 4]");
  for (std::size_t l = 0; l < eps.size(); ++l) {
    if (!std::isfinite(eps[l]) || !std::isfinite(v[l]) || !std::isfinite(w[l]))
      throw InvalidInput("bath parameters must be finite");
    if (eps[l] < kEpsMin) throw InvalidInput("bath energies must be >= 1e-6");
  }
  if (!std::isfinite(phi_c)) throw InvalidInput("phi_C must be finite");
}

ProductSpace lift(const OperatorSet& ops, int l_b) {
  check_dim(ops.dim, l_b);
  ProductSpace s;
  s.imp_dim = ops.dim;
  s.l_b = l_b;
  s.dim = ops.dim << l_b;
  const Eigen::MatrixXd id_bath = Eigen::MatrixXd::Identity(1 << l_b, 1 << l_b);
  s.b0 = kron(ops.b, id_bath);
  s.n0 = kron(ops.n, id_bath);
  s.nn0 = kron(ops.nn, id_bath);
  const Eigen::MatrixXd id_imp = Eigen::MatrixXd::Identity(ops.dim, ops.dim);
  for (int l = 0; l < l_b; ++l) {
    const Eigen::MatrixXd a = bath_annihilator(l, l_b);
    s.bath_n.push_back(kron(id_imp, a.transpose() * a));
  }
  return s;
}

Eigen::MatrixXd hybridization_term(const AndersonParams& params, const OperatorSet& ops) {
  const int l_b = params.l_b();
  check_dim(ops.dim, l_b);
  const int d = ops.dim << l_b;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (int l = 0; l < l_b; ++l) {
    const Eigen::MatrixXd a = bath_annihilator(l, l_b);
    const Eigen::MatrixXd ad = a.transpose();
    if (params.v[l] != 0.0) h += params.v[l] * (kron(ops.b, ad) + kron(ops.b_dag, a));
    if (params.w[l] != 0.0) h += params.w[l] * (kron(ops.b, a) + kron(ops.b_dag, ad));
  }
  return h;
}

numerics::SymmetricMatrix build_aim_hamiltonian(const AndersonParams& params,
                                                const TruncationScheme& scheme) {
  params.validate();
  scheme.validate();
  const OperatorSet ops = build_operators(scheme);
  const int l_b = params.l_b();
  check_dim(ops.dim, l_b);
  const ModelParams& m = params.model;

  const Eigen::MatrixXd local = 0.5 * m.u * ops.nn - m.mu_over_u * ops.n -
                                m.zj() * params.phi_c * (ops.b + ops.b_dag);
  const int db = 1 << l_b;
  Eigen::MatrixXd bath = Eigen::MatrixXd::Zero(db, db);
  for (int l = 0; l < l_b; ++l) {
    const Eigen::MatrixXd a = bath_annihilator(l, l_b);
    bath += params.eps[l] * (a.transpose() * a);
  }
  Eigen::MatrixXd h = kron(local, Eigen::MatrixXd::Identity(db, db)) +
                      kron(Eigen::MatrixXd::Identity(ops.dim, ops.dim), bath) +
                      hybridization_term(params, ops);
  return numerics::SymmetricMatrix(h);
}

double ground_energy(const AndersonParams& params, const TruncationScheme& scheme) {
  return numerics::eigvalsh(build_aim_hamiltonian(params, scheme))[0];
}

EDSolution ground_observables(const numerics::SymmetricMatrix& h, const AndersonParams& params,
                              const TruncationScheme& scheme) {
  const OperatorSet ops = build_operators(scheme);
  const ProductSpace space = lift(ops, params.l_b());
  if (h.dim() != space.dim) throw InvalidInput("Hamiltonian does not match the product space");

  EDSolution sol;
  sol.eig = numerics::eigh(h);
  const Eigen::VectorXd g = sol.eig.vectors.col(0);
  EDResult& r = sol.result;
  r.energies = sol.eig.values;
  r.e_aim = sol.eig.values[0];
  r.b_signed = g.dot(space.b0 * g);
  r.phi = std::abs(r.b_signed);
  r.n_mean = g.dot(space.n0 * g);
  r.nn_mean = g.dot(space.nn0 * g);
  r.h_hyb_mean = g.dot(hybridization_term(params, ops) * g);
  for (const auto& nl : space.bath_n) r.bath_occupation.push_back(g.dot(nl * g));
  return sol;
}

EDSolution solve(const AndersonParams& params, const TruncationScheme& scheme) {
  return ground_observables(build_aim_hamiltonian(params, scheme), params, scheme);
}

double MatsubaraGrid::omega(int k) const { return 2.0 * std::numbers::pi * (k + 1) / beta; }

std::vector<double> MatsubaraGrid::omegas() const {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = omega(k);
  return out;
}

namespace {

struct Excitations {
  Eigen::VectorXd gap;     // E_m - E_0
  Eigen::VectorXd create;  // <m|db^dag|0>
  Eigen::VectorXd remove;  // <m|db|0>
};

Excitations excitations(const numerics::EigenDecomposition& eig, const ProductSpace& space,
                        double b_signed) {
  const Eigen::VectorXd g = eig.vectors.col(0);
  Excitations ex;
  ex.gap = eig.values.array() - eig.values[0];
  ex.create = eig.vectors.transpose() * (space.b0.transpose() * g - b_signed * g);
  ex.remove = eig.vectors.transpose() * (space.b0 * g - b_signed * g);
  return ex;
}

constexpr double kGapSkip = 1e-12;

}  // namespace

NambuGreen lehmann_green(const numerics::EigenDecomposition& eig, const ProductSpace& space,
                         double b_signed, const MatsubaraGrid& grid) {
  const Excitations ex = excitations(eig, space, b_signed);
  NambuGreen out;
  out.beta_fict = grid.beta;
  out.omegas = grid.omegas();
  out.g11.assign(grid.n, 0.0);
  out.g12.assign(grid.n, 0.0);

  const Eigen::Index d = ex.gap.size();
  if (d > 1 && ex.gap[1] < 1e-10 &&
      (std::abs(ex.create[1]) > 1e-8 || std::abs(ex.remove[1]) > 1e-8))
    out.degenerate_ground = true;

  for (Eigen::Index m = 0; m < d; ++m) {
    const double de = ex.gap[m];
    if (de < kGapSkip) continue;
    const double wc = ex.create[m] * ex.create[m];
    const double wr = ex.remove[m] * ex.remove[m];
    const double cross = ex.create[m] * ex.remove[m];
    if (wc == 0.0 && wr == 0.0) continue;
    for (int k = 0; k < grid.n; ++k) {
      const std::complex<double> iw(0.0, out.omegas[k]);
      const std::complex<double> up = 1.0 / (iw - de);
      const std::complex<double> down = 1.0 / (iw + de);
      out.g11[k] += wc * up - wr * down;
      out.g12[k] += cross * (up - down);
    }
  }
  return out;
}

double static_susceptibility(const numerics::EigenDecomposition& eig, const ProductSpace& space,
                             double b_signed) {
  const Excitations ex = excitations(eig, space, b_signed);
  double chi = 0.0;
  for (Eigen::Index m = 0; m < ex.gap.size(); ++m) {
    if (ex.gap[m] < kGapSkip) continue;
    chi += (ex.create[m] * ex.create[m] + ex.remove[m] * ex.remove[m]) / ex.gap[m];
  }
  return chi;
}

}  // namespace ctsboson::impurity
