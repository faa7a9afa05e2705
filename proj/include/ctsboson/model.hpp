#pragma once

#include "ctsboson/errors.hpp"

#include <cmath>

namespace ctsboson {

/// Homogeneous Bose-Hubbard parameters
///   H = -J sum_<ij> (b_i^dag b_j + h.c.) + U/2 sum_i n_i (n_i - 1) - mu sum_i n_i
/// in units of U. `u` stays 1 everywhere except the non-interacting oracle fixtures.
struct ModelParams {
  double j_over_u = 0.0;
  double mu_over_u = 0.0;
  int z = 6;
  double u = 1.0;

  [[nodiscard]] double zj() const { return z * j_over_u; }

  void validate() const {
    if (!std::isfinite(j_over_u) || j_over_u < 0.0) throw InvalidInput("J/U must be finite and >= 0");
    if (!std::isfinite(mu_over_u)) throw InvalidInput("mu/U must be finite");
    if (z < 1) throw InvalidInput("coordination number z must be >= 1");
    if (!std::isfinite(u) || u < 0.0) throw InvalidInput("U must be finite and >= 0");
  }
};

}  // namespace ctsboson
