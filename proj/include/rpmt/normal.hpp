#pragma once

namespace rpmt {

// Standard normal CDF, erfc-based.
double normal_cdf(double x);

// Inverse standard normal CDF, absolute error below 1e-12 on (0, 1).
double normal_quantile(double prob);

}  // namespace rpmt
