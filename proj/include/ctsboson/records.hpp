#pragma once

// One CSV row per solver run. Columns, in order:
//
//   solver,scheme_kind,n_c,alpha_opt,mu_over_u,j_over_u,z,l_bath,phi,n_mean,
//   e_tot,e_paper,g_c0,e_kin_con,iters,time_ms,converged
//
// Reals are printed with 12 significant digits (%.12g); e_paper is empty for
// BDMFT rows; converged is "true" or "false".

#include "ctsboson/bdmft.hpp"
#include "ctsboson/cts_basis.hpp"
#include "ctsboson/gutzwiller.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctsboson {

enum class Solver { Gutzwiller, Bdmft };

std::string to_string(Solver s);
Solver parse_solver(const std::string& text);

struct ResultRecord {
  Solver solver = Solver::Gutzwiller;
  BasisKind scheme_kind = BasisKind::Fock;
  int n_c = 0;
  double alpha_opt = 0.0;
  double mu_over_u = 0.0;
  double j_over_u = 0.0;
  int z = 6;
  int l_bath = 0;
  double phi = 0.0;
  double n_mean = 0.0;
  double e_tot = 0.0;
  std::optional<double> e_paper;
  double g_c0 = 0.0;
  double e_kin_con = 0.0;
  int iters = 0;
  double time_ms = 0.0;
  bool converged = false;

  [[nodiscard]] TruncationScheme scheme() const { return {scheme_kind, n_c, 0.0}; }
};

inline constexpr std::string_view kCsvHeader =
    "solver,scheme_kind,n_c,alpha_opt,mu_over_u,j_over_u,z,l_bath,phi,n_mean,e_tot,e_paper,"
    "g_c0,e_kin_con,iters,time_ms,converged";

ResultRecord make_record(const gutzwiller::Config& config, const gutzwiller::Result& r);
ResultRecord make_record(const bdmft::Config& config, const bdmft::Result& r);

/// Row for a run that threw: solver, scheme and parameters filled, numbers NaN.
ResultRecord failed_record(Solver solver, const TruncationScheme& scheme, double mu, double j, int z,
                           int l_bath);

/// Reals as %.12g.
std::string format_real(double x);

std::string emit_row(const ResultRecord& r);
/// Throws InvalidInput on a malformed row.
ResultRecord parse_row(std::string_view line);

void write_csv(std::ostream& out, const std::vector<ResultRecord>& rows);
/// Expects the exact header line first.
std::vector<ResultRecord> read_csv(std::istream& in);

}  // namespace ctsboson
