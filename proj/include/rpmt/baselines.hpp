#pragma once

#include "rpmt/rp_test.hpp"

namespace rpmt {

// Competing mean-shift statistics sharing the TwoSampleData interface.
// Each returns a null-calibrated z-score; `statistic` holds the centered
// quadratic the method is built on.

// Statistic built on |x_bar - y_bar|^2, centered by tau tr(S) and scaled by
// an unbiased estimate of tr(Sigma^2).
TestOutcome bs_statistic(const TwoSampleData& data, double alpha = 0.05);

// U-statistic numerator: the |x_bar - y_bar|^2 analogue with the diagonal
// self-products removed.
double cq_numerator(const TwoSampleData& data);

// As bs_statistic but with the self-product-free numerator and leave-out
// U-statistic estimates of tr(Sigma^2); needs at least 3 observations per
// group for the variance estimate.
TestOutcome cq_statistic(const TwoSampleData& data, double alpha = 0.05);

// Statistic built on the diagonally standardized quadratic form
// (x_bar - y_bar)' D^{-1} (x_bar - y_bar).
TestOutcome sd_statistic(const TwoSampleData& data, double alpha = 0.05);

}  // namespace rpmt
