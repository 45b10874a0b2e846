#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpmt/parallel.hpp"

namespace rpmt {

// One empirical check of a stated bound or limit, with its Monte Carlo
// uncertainty where meaningful.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured quantity
  double target = 0.0;     // bound or reference value
  double std_error = 0.0;  // MC standard error (0 when exact)
  std::string note;
};

// Gaussian quadratic-form concentration thresholds.
std::vector<CheckResult> validate_quadform_tails(std::uint64_t seed, Exec exec = Exec::OpenMP);

// Spectral bounds on the projection-averaged inverse.
std::vector<CheckResult> validate_projected_inverse(std::uint64_t seed, Exec exec = Exec::OpenMP);

// Both of the above.
std::vector<CheckResult> validate_lemmas(std::uint64_t seed, Exec exec = Exec::OpenMP);

// Inverse-Wishart marginal moments and the chi-square reduction.
std::vector<CheckResult> validate_wishart(std::uint64_t seed, Exec exec = Exec::OpenMP);

// Scaling of the projected divergence under spiked and tilted regimes, and
// the efficiency curve across projection ratios.
std::vector<CheckResult> validate_scaling(std::uint64_t seed, Exec exec = Exec::OpenMP);

}  // namespace rpmt
