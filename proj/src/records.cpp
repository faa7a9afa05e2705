#include "ctsboson/records.hpp"

#include "ctsboson/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

namespace ctsboson {

std::string to_string(Solver s) { return s == Solver::Gutzwiller ? "gutzwiller" : "bdmft"; }

Solver parse_solver(const std::string& text) {
  if (text == "gutzwiller") return Solver::Gutzwiller;
  if (text == "bdmft") return Solver::Bdmft;
  throw InvalidInput("unknown solver '" + text + "' (expected gutzwiller or bdmft)");
}

ResultRecord make_record(const gutzwiller::Config& config, const gutzwiller::Result& r) {
  ResultRecord rec;
  rec.solver = Solver::Gutzwiller;
  rec.scheme_kind = config.scheme.kind;
  rec.n_c = config.scheme.n_c;
  rec.alpha_opt = r.alpha_opt;
  rec.mu_over_u = config.model.mu_over_u;
  rec.j_over_u = config.model.j_over_u;
  rec.z = config.model.z;
  rec.l_bath = 0;
  rec.phi = r.phi;
  rec.n_mean = r.n_mean;
  rec.e_tot = r.e_site;
  rec.e_paper = r.e_paper;
  rec.iters = r.iters;
  rec.time_ms = 1e3 * r.wall_time.count();
  rec.converged = r.converged;
  return rec;
}

ResultRecord make_record(const bdmft::Config& config, const bdmft::Result& r) {
  ResultRecord rec;
  rec.solver = Solver::Bdmft;
  rec.scheme_kind = config.scheme.kind;
  rec.n_c = config.scheme.n_c;
  rec.alpha_opt = r.alpha_opt;
  rec.mu_over_u = config.model.mu_over_u;
  rec.j_over_u = config.model.j_over_u;
  rec.z = config.model.z;
  rec.l_bath = config.l_b;
  rec.phi = r.phi;
  rec.n_mean = r.n_mean;
  rec.e_tot = r.e_tot_site;
  rec.g_c0 = r.g_c0;
  rec.e_kin_con = r.e_kin_con;
  rec.iters = r.iters;
  rec.time_ms = 1e3 * r.wall_time.count();
  rec.converged = r.converged;
  return rec;
}

ResultRecord failed_record(Solver solver, const TruncationScheme& scheme, double mu, double j, int z,
                           int l_bath) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ResultRecord rec;
  rec.solver = solver;
  rec.scheme_kind = scheme.kind;
  rec.n_c = scheme.n_c;
  rec.alpha_opt = nan;
  rec.mu_over_u = mu;
  rec.j_over_u = j;
  rec.z = z;
  rec.l_bath = l_bath;
  rec.phi = rec.n_mean = rec.e_tot = rec.g_c0 = rec.e_kin_con = nan;
  if (solver == Solver::Gutzwiller) rec.e_paper = nan;
  return rec;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string emit_row(const ResultRecord& r) {
  std::string s;
  const auto add = [&](const std::string& f) {
    if (!s.empty()) s += ',';
    s += f;
  };
  add(to_string(r.solver));
  add(r.scheme_kind == BasisKind::Cts ? "cts" : "fock");
  add(std::to_string(r.n_c));
  add(format_real(r.alpha_opt));
  add(format_real(r.mu_over_u));
  add(format_real(r.j_over_u));
  add(std::to_string(r.z));
  add(std::to_string(r.l_bath));
  add(format_real(r.phi));
  add(format_real(r.n_mean));
  add(format_real(r.e_tot));
  add(r.e_paper ? format_real(*r.e_paper) : "");
  add(format_real(r.g_c0));
  add(format_real(r.e_kin_con));
  add(std::to_string(r.iters));
  add(format_real(r.time_ms));
  add(r.converged ? "true" : "false");
  return s;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double real_field(std::string_view f, const char* name) {
  if (f == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (f == "inf") return std::numeric_limits<double>::infinity();
  if (f == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
  if (ec != std::errc() || ptr != f.data() + f.size() || f.empty())
    throw InvalidInput(std::string("bad value for ") + name + ": '" + std::string(f) + "'");
  return x;
}

int int_field(std::string_view f, const char* name) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
  if (ec != std::errc() || ptr != f.data() + f.size() || f.empty())
    throw InvalidInput(std::string("bad value for ") + name + ": '" + std::string(f) + "'");
  return x;
}

}  // namespace

ResultRecord parse_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split(line);
  if (f.size() != 17)
    throw InvalidInput("CSV row has " + std::to_string(f.size()) + " fields, expected 17");
  ResultRecord r;
  r.solver = parse_solver(std::string(f[0]));
  if (f[1] == "fock")
    r.scheme_kind = BasisKind::Fock;
  else if (f[1] == "cts")
    r.scheme_kind = BasisKind::Cts;
  else
    throw InvalidInput("bad scheme_kind '" + std::string(f[1]) + "'");
  r.n_c = int_field(f[2], "n_c");
  r.alpha_opt = real_field(f[3], "alpha_opt");
  r.mu_over_u = real_field(f[4], "mu_over_u");
  r.j_over_u = real_field(f[5], "j_over_u");
  r.z = int_field(f[6], "z");
  r.l_bath = int_field(f[7], "l_bath");
  r.phi = real_field(f[8], "phi");
  r.n_mean = real_field(f[9], "n_mean");
  r.e_tot = real_field(f[10], "e_tot");
  if (!f[11].empty()) r.e_paper = real_field(f[11], "e_paper");
  r.g_c0 = real_field(f[12], "g_c0");
  r.e_kin_con = real_field(f[13], "e_kin_con");
  r.iters = int_field(f[14], "iters");
  r.time_ms = real_field(f[15], "time_ms");
  if (f[16] == "true")
    r.converged = true;
  else if (f[16] == "false")
    r.converged = false;
  else
    throw InvalidInput("bad converged flag '" + std::string(f[16]) + "'");
  return r;
}

void write_csv(std::ostream& out, const std::vector<ResultRecord>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << emit_row(r) << '\n';
}

std::vector<ResultRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw InvalidInput("unexpected CSV header");
  std::vector<ResultRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_row(line));
  }
  return rows;
}

}  // namespace ctsboson
