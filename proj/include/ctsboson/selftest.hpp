#pragma once

// Built-in verification suite: closed forms against explicit series, basis
// orthonormality, b-leakage, Lehmann sum rules, the non-interacting two-site
// hybridization oracle and a bath-fit round trip.

#include <iosfwd>
#include <string>
#include <vector>

namespace ctsboson {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // worst deviation and tolerance
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;

  [[nodiscard]] bool ok() const;
};

struct SelftestOptions {
  // Negative control: scales the <N_c - 1|b|alpha> coefficient by 1.01 before the
  // leakage check, which must then fail.
  bool inject_fault = false;
};

SelftestReport run_selftest(const SelftestOptions& options = {});

/// One "PASS name: detail" / "FAIL name: detail" line per check.
void print_report(std::ostream& out, const SelftestReport& report);

}  // namespace ctsboson
