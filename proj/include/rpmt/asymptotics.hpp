#pragma once

#include <optional>

#include "rpmt/models.hpp"
#include "rpmt/parallel.hpp"
#include "rpmt/rng.hpp"
#include "rpmt/types.hpp"

namespace rpmt {

// Inputs of the projected test's asymptotic power function.
struct PowerParams {
  double alpha;        // level in (0, 1)
  double b;            // limit of n1 / n, in (0, 1)
  double y;            // limit of k / n, in (0, 1)
  double n;            // effective sample size n1 + n2 - 2
  double delta_bar_k;  // twice the projected KL divergence, averaged over frames
};

// Phi(-z_{1-alpha} + b (1-b) sqrt((1-y)/(2y)) delta_bar_k sqrt(n)).
double power_rp(const PowerParams& params);

// Closed-form asymptotic power of the competing tests at the true (delta,
// Sigma).
double power_cq(double alpha, double b, double n, const Vector& delta,
                const RealizedCovariance& cov);
double power_sd(double alpha, double b, double n, const Vector& delta,
                const RealizedCovariance& cov);

// delta' Q (Q' Sigma Q)^{-1} Q' delta for an orthonormal frame Q.
double delta_k(const Vector& delta, const RealizedCovariance& cov, const Matrix& q);

struct McEstimate {
  double estimate;
  double std_error;
};

// Monte Carlo mean of delta_k over `draws` Haar frames.
McEstimate delta_bar_k_mc(const Vector& delta, const RealizedCovariance& cov, Index k, Index draws,
                          const RngStream& rng, Exec exec = Exec::OpenMP);

// Squared ratios of the power-driving terms; below 1 favours the projected
// test.
double are_cq_rp(const Vector& delta, const RealizedCovariance& cov, Index k, Index n,
                 double delta_bar_k);
double are_sd_rp(const Vector& delta, const RealizedCovariance& cov, Index k, Index n,
                 double delta_bar_k);

// Efficiency of projection ratio y against the reference y* = 1/2; tends to
// 4 y (1-y) when delta_bar scales linearly in k.
double are_rp_vs_kstar(double y, double delta_bar_k, double delta_bar_kstar);

// Sample-size sufficiency report for beating CQ and SD at efficiency
// target epsilon1, using c1 = (4/epsilon1)(1+margin). The are_* fields are
// the plug-in asymptotic efficiencies 4 * summary / n implied by the
// linear-in-k scaling of delta_bar at y = 1/2.
struct AreReport {
  double are_cq;
  double are_sd_unif;
  double are_sd_tilt;
  CovSummaries summaries;
  bool sufficient_cq;
  bool sufficient_sd_unif;
  bool sufficient_sd_tilt;
  double epsilon1;
  double c1;
};

AreReport sufficient_condition_report(const RealizedCovariance& cov, Index n, double epsilon1,
                                      double margin = 0.01);

// Two-sided concentration thresholds for Z'AZ / tr(A), each with tail mass
// at most exp(-t^2/2). The lower threshold exists only for
// t < sqrt(tr(A)/|A|_op - 1).
struct QuadformTailBound {
  double upper_threshold;
  std::optional<double> lower_threshold;
  double tail_bound;
};

QuadformTailBound quadform_tail_bound(const Matrix& a, double t);

// Monte Carlo estimate of E_Q[Q (Q' Sigma Q)^{-1} Q'] with its operator
// norm and trace next to the proven bounds.
struct ProjectedInverseBounds {
  double op_norm_estimate;
  double trace_estimate;
  double op_bound;     // 1 / lambda_min(Sigma)
  double trace_bound;  // k p / tr(Sigma)
  double op_std_error;
  double trace_std_error;
};

ProjectedInverseBounds projected_inverse_bounds_oracle(const RealizedCovariance& cov, Index k,
                                                       Index draws, const RngStream& rng,
                                                       Exec exec = Exec::OpenMP);

// Empirical moments of u' W^{-1} u for white Wishart W_k(n, I) against the
// exact inverse-chi-square values; requires n > k + 3.
struct WishartMarginalOracle {
  double mean;
  double variance;
  double expected_mean;  // 1 / (n - k - 1)
  double expected_var;   // 2 / ((n-k-1)^2 (n-k-3))
  double mean_std_error;
  double var_std_error;
};

WishartMarginalOracle inverse_wishart_marginal_oracle(Index k, Index n, Index draws,
                                                      const RngStream& rng,
                                                      Exec exec = Exec::OpenMP);

}  // namespace rpmt
