#include "ctsboson/errors.hpp"
#include "ctsboson/records.hpp"
#include "ctsboson/selftest.hpp"
#include "ctsboson/sweep.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ctsboson;

namespace {

py::dict to_dict(const ResultRecord& r) {
  py::dict d;
  d["solver"] = to_string(r.solver);
  d["scheme_kind"] = r.scheme_kind == BasisKind::Cts ? "cts" : "fock";
  d["n_c"] = r.n_c;
  d["alpha_opt"] = r.alpha_opt;
  d["mu_over_u"] = r.mu_over_u;
  d["j_over_u"] = r.j_over_u;
  d["z"] = r.z;
  d["l_bath"] = r.l_bath;
  d["phi"] = r.phi;
  d["n_mean"] = r.n_mean;
  d["e_tot"] = r.e_tot;
  d["e_paper"] = r.e_paper ? py::object(py::float_(*r.e_paper)) : py::object(py::none());
  d["g_c0"] = r.g_c0;
  d["e_kin_con"] = r.e_kin_con;
  d["iters"] = r.iters;
  d["time_ms"] = r.time_ms;
  d["converged"] = r.converged;
  return d;
}

ResultRecord from_dict(const py::dict& d) {
  ResultRecord r;
  r.solver = parse_solver(d["solver"].cast<std::string>());
  r.scheme_kind = d["scheme_kind"].cast<std::string>() == "cts" ? BasisKind::Cts : BasisKind::Fock;
  r.n_c = d["n_c"].cast<int>();
  r.alpha_opt = d["alpha_opt"].cast<double>();
  r.mu_over_u = d["mu_over_u"].cast<double>();
  r.j_over_u = d["j_over_u"].cast<double>();
  r.z = d["z"].cast<int>();
  r.l_bath = d["l_bath"].cast<int>();
  r.phi = d["phi"].cast<double>();
  r.n_mean = d["n_mean"].cast<double>();
  r.e_tot = d["e_tot"].cast<double>();
  if (!d["e_paper"].is_none()) r.e_paper = d["e_paper"].cast<double>();
  r.g_c0 = d["g_c0"].cast<double>();
  r.e_kin_con = d["e_kin_con"].cast<double>();
  r.iters = d["iters"].cast<int>();
  r.time_ms = d["time_ms"].cast<double>();
  r.converged = d["converged"].cast<bool>();
  return r;
}

py::list to_list(const std::vector<ResultRecord>& rows) {
  py::list out;
  for (const auto& r : rows) out.append(to_dict(r));
  return out;
}

SweepSpec make_spec(const std::string& solver, std::vector<double> mu, std::vector<double> j,
                    const std::vector<std::string>& schemes, int z, int l_b,
                    const std::string& alpha_scheme) {
  SweepSpec s;
  s.solver = parse_solver(solver);
  s.mu_list = std::move(mu);
  s.j_list = std::move(j);
  for (const auto& t : schemes) s.schemes.push_back(parse_scheme(t));
  s.z = z;
  s.bdmft.l_b = l_b;
  s.bdmft.alpha_scheme = bdmft::parse_alpha_scheme(alpha_scheme);
  return s;
}

ResultRecord single(const std::string& solver, double mu, double j, const std::string& scheme, int z,
                    int l_b, const std::string& alpha_scheme) {
  SweepSpec s = make_spec(solver, {mu}, {j}, {scheme}, z, l_b, alpha_scheme);
  s.warm_start = false;
  const auto s0 = s.schemes[0];
  if (s.solver == Solver::Gutzwiller) {
    gutzwiller::Config c = s.gutzwiller;
    c.model = {j, mu, z};
    c.scheme = s0;
    return make_record(c, gutzwiller::solve(c));
  }
  bdmft::Config c = s.bdmft;
  c.model = {j, mu, z};
  c.scheme = s0;
  return make_record(c, bdmft::solve(c));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bose-Hubbard Gutzwiller and BDMFT solvers with Fock or coherent-tail truncation";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<BoundaryError>(m, "BoundaryError", PyExc_RuntimeError);

  m.attr("CSV_HEADER") = std::string(kCsvHeader);

  m.def(
      "gutzwiller",
      [](double mu, double j, const std::string& scheme, int z) {
        return to_dict(single("gutzwiller", mu, j, scheme, z, 2, "eaim"));
      },
      py::arg("mu"), py::arg("j"), py::arg("scheme") = "fock:20", py::arg("z") = 6,
      "Single Gutzwiller point; returns a result row as a dict.");

  m.def(
      "bdmft",
      [](double mu, double j, const std::string& scheme, int l_b, const std::string& alpha_scheme,
         int z) {
        py::gil_scoped_release release;
        auto r = single("bdmft", mu, j, scheme, z, l_b, alpha_scheme);
        py::gil_scoped_acquire acquire;
        return to_dict(r);
      },
      py::arg("mu"), py::arg("j"), py::arg("scheme") = "fock:20", py::arg("l_b") = 2,
      py::arg("alpha_scheme") = "eaim", py::arg("z") = 6,
      "Single BDMFT point; returns a result row as a dict.");

  m.def(
      "sweep",
      [](const std::string& solver, std::vector<double> mu, std::vector<double> j,
         const std::vector<std::string>& schemes, int l_b, const std::string& alpha_scheme, int z,
         int workers, bool warm_start) {
        SweepSpec s = make_spec(solver, std::move(mu), std::move(j), schemes, z, l_b, alpha_scheme);
        s.workers = workers;
        s.warm_start = warm_start;
        std::vector<ResultRecord> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(s);
        }
        return to_list(rows);
      },
      py::arg("solver"), py::arg("mu"), py::arg("j"), py::arg("schemes"), py::arg("l_b") = 2,
      py::arg("alpha_scheme") = "eaim", py::arg("z") = 6, py::arg("workers") = 1,
      py::arg("warm_start") = true, "Runs mu x J x schemes; returns a list of result dicts.");

  m.def(
      "mott_boundary",
      [](const std::string& solver, const std::string& scheme, double mu, double j_lo, double j_hi,
         double tol_j, int l_b, const std::string& alpha_scheme, int z) {
        const SweepSpec s = make_spec(solver, {mu}, {0.0}, {scheme}, z, l_b, alpha_scheme);
        BoundaryResult r;
        {
          py::gil_scoped_release release;
          r = detect_mott_boundary(s, s.schemes[0], mu, j_lo, j_hi, tol_j);
        }
        py::dict d;
        d["j_c"] = r.j_c;
        d["j_mott"] = r.j_lo;
        d["j_superfluid"] = r.j_hi;
        d["evaluations"] = r.evaluations;
        return d;
      },
      py::arg("solver"), py::arg("scheme"), py::arg("mu"), py::arg("j_lo"), py::arg("j_hi"),
      py::arg("tol_j") = 1e-4, py::arg("l_b") = 2, py::arg("alpha_scheme") = "eaim", py::arg("z") = 6,
      "Mott boundary J_c/U by bisection between a Mott and a superfluid bracket end.");

  m.def("j_grid", &j_grid, py::arg("lo"), py::arg("hi"), py::arg("step"));

  m.def(
      "selftest",
      [](bool inject_fault) {
        const auto rep = run_selftest({inject_fault});
        py::list checks;
        for (const auto& c : rep.checks) checks.append(py::make_tuple(c.name, c.passed, c.detail));
        return py::make_tuple(rep.ok(), checks);
      },
      py::arg("inject_fault") = false, "Returns (ok, [(name, passed, detail), ...]).");

  m.def(
      "to_csv",
      [](const py::list& rows) {
        std::vector<ResultRecord> recs;
        for (const auto& r : rows) recs.push_back(from_dict(r.cast<py::dict>()));
        std::ostringstream out;
        write_csv(out, recs);
        return out.str();
      },
      py::arg("rows"), "CSV text (header included) for a list of result dicts.");

  m.def(
      "from_csv",
      [](const std::string& text) {
        std::istringstream in(text);
        return to_list(read_csv(in));
      },
      py::arg("text"), "Parses CSV text produced by to_csv or the command-line tool.");
}
