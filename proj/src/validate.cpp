#include "rpmt/validate.hpp"

#include <cmath>
#include <vector>

#include "rpmt/asymptotics.hpp"
#include "rpmt/models.hpp"
#include "rpmt/sampling.hpp"

namespace rpmt {

namespace {

// Empirical tails of Z'AZ / tr(A) against the two-sided thresholds, one
// pair of checks per t.
void tail_checks(const RealizedCovariance& cov, const std::string& label, const RngStream& rng,
                 Exec exec, std::vector<CheckResult>& out) {
  const Index draws = 100000;
  const Index p = cov.dim();
  const double tr = cov.sigma.trace();

  std::vector<double> vals(static_cast<std::size_t>(draws));
  parallel_for(draws, exec, [&](std::int64_t i) {
    RngStream s = rng.substream(static_cast<std::uint64_t>(i));
    Vector z = gaussian_matrix(p, 1, s).col(0);
    vals[static_cast<std::size_t>(i)] = (cov.sqrt_factor.transpose() * z).squaredNorm() / tr;
  });

  for (double t : {0.5, 1.0, 2.0}) {
    QuadformTailBound bound = quadform_tail_bound(cov.sigma, t);
    const double m = static_cast<double>(draws);

    double upper_hits = 0.0;
    for (double v : vals) upper_hits += v >= bound.upper_threshold ? 1.0 : 0.0;
    const double up = upper_hits / m;
    const double up_se = std::sqrt(up * (1.0 - up) / m);
    out.push_back({label + " upper tail t=" + std::to_string(t), up <= bound.tail_bound + 2.0 * up_se,
                   up, bound.tail_bound, up_se, "empirical tail <= bound + 2 SE"});

    if (bound.lower_threshold) {
      double lower_hits = 0.0;
      for (double v : vals) lower_hits += v <= *bound.lower_threshold ? 1.0 : 0.0;
      const double lo = lower_hits / m;
      const double lo_se = std::sqrt(lo * (1.0 - lo) / m);
      out.push_back({label + " lower tail t=" + std::to_string(t),
                     lo <= bound.tail_bound + 2.0 * lo_se, lo, bound.tail_bound, lo_se,
                     "empirical tail <= bound + 2 SE"});
    }
  }
}

}  // namespace

std::vector<CheckResult> validate_quadform_tails(std::uint64_t seed, Exec exec) {
  std::vector<CheckResult> out;
  RngStream root(seed);

  {
    RngStream r = root.substream("tails-identity");
    RngStream unused = r.substream("realize");
    RealizedCovariance eye = realize_covariance({IdentityCov{}, 100}, unused);
    tail_checks(eye, "identity p=100", r, exec, out);
  }
  {
    RngStream r = root.substream("tails-fast");
    RngStream unused = r.substream("realize");
    RealizedCovariance fast = realize_covariance({DiagonalDecay{Decay::Fast}, 200}, unused);
    tail_checks(fast, "diagonal fast p=200", r, exec, out);
  }
  {
    RngStream r = root.substream("tails-block");
    RngStream unused = r.substream("realize");
    RealizedCovariance block = realize_covariance({Block{40, 5, 0.8}, 200}, unused);
    tail_checks(block, "block p=200", r, exec, out);
  }
  return out;
}

std::vector<CheckResult> validate_projected_inverse(std::uint64_t seed, Exec exec) {
  std::vector<CheckResult> out;
  RngStream root(seed);

  {
    // Spectral bounds on E_Q[Q (Q' Sigma Q)^{-1} Q'] at p=50, k=10.
    RngStream r = root.substream("projected-inverse");
    RngStream realize_stream = r.substream("realize");
    RealizedCovariance cov = realize_covariance({RandomOrthoDecay{Decay::Slow}, 50}, realize_stream);
    ProjectedInverseBounds b =
        projected_inverse_bounds_oracle(cov, 10, 5000, r.substream("draws"), exec);
    out.push_back({"projected inverse op norm, random slow p=50 k=10",
                   b.op_norm_estimate <= b.op_bound + 3.0 * b.op_std_error, b.op_norm_estimate,
                   b.op_bound, b.op_std_error, "estimate <= 1/lambda_min + 3 SE"});
    out.push_back({"projected inverse trace, random slow p=50 k=10",
                   b.trace_estimate >= b.trace_bound - 3.0 * b.trace_std_error, b.trace_estimate,
                   b.trace_bound, b.trace_std_error, "estimate >= k p / tr(Sigma) - 3 SE"});
  }
  {
    // Block covariance at p=20 (m=4, d=5) exercises the trace bound away
    // from the identity case.
    RngStream r = root.substream("projected-inverse-block");
    RngStream realize_stream = r.substream("realize");
    RealizedCovariance cov = realize_covariance({Block{4, 5, 0.8}, 20}, realize_stream);
    ProjectedInverseBounds b =
        projected_inverse_bounds_oracle(cov, 5, 5000, r.substream("draws"), exec);
    out.push_back({"projected inverse trace, block p=20 k=5",
                   b.trace_estimate >= b.trace_bound - 3.0 * b.trace_std_error, b.trace_estimate,
                   b.trace_bound, b.trace_std_error, "estimate >= k p / tr(Sigma) - 3 SE"});
  }
  {
    // Identity covariance saturates the trace bound exactly.
    RngStream r = root.substream("projected-inverse-identity");
    RngStream realize_stream = r.substream("realize");
    RealizedCovariance cov = realize_covariance({IdentityCov{}, 40}, realize_stream);
    ProjectedInverseBounds b =
        projected_inverse_bounds_oracle(cov, 8, 1000, r.substream("draws"), exec);
    out.push_back({"projected inverse trace at identity p=40 k=8",
                   std::abs(b.trace_estimate - 8.0) < 1e-8 && b.op_norm_estimate <= 1.0 + 1e-8,
                   b.trace_estimate, 8.0, 0.0, "trace equals k exactly, op norm <= 1"});
  }
  return out;
}

std::vector<CheckResult> validate_lemmas(std::uint64_t seed, Exec exec) {
  std::vector<CheckResult> out = validate_quadform_tails(seed, exec);
  std::vector<CheckResult> inverse = validate_projected_inverse(seed, exec);
  out.insert(out.end(), inverse.begin(), inverse.end());
  return out;
}

std::vector<CheckResult> validate_wishart(std::uint64_t seed, Exec exec) {
  std::vector<CheckResult> out;
  RngStream root(seed);

  {
    WishartMarginalOracle w =
        inverse_wishart_marginal_oracle(20, 60, 20000, root.substream("k20n60"), exec);
    out.push_back({"u'W^{-1}u mean, k=20 n=60",
                   std::abs(w.mean - w.expected_mean) <= 3.0 * w.mean_std_error, w.mean,
                   w.expected_mean, w.mean_std_error, "within 3 SE of 1/(n-k-1)"});
    out.push_back({"u'W^{-1}u variance, k=20 n=60",
                   std::abs(w.variance - w.expected_var) <= 4.0 * w.var_std_error, w.variance,
                   w.expected_var, w.var_std_error, "within 4 SE of 2/((n-k-1)^2 (n-k-3))"});
  }
  {
    WishartMarginalOracle w =
        inverse_wishart_marginal_oracle(1, 10, 100000, root.substream("k1n10"), exec);
    out.push_back({"u'W^{-1}u mean, k=1 n=10 (inverse chi-square)",
                   std::abs(w.mean - w.expected_mean) <= 3.0 * w.mean_std_error, w.mean,
                   w.expected_mean, w.mean_std_error, "within 3 SE of 1/8"});
  }
  {
    // Scalar Wishart is a chi-square; check its mean directly.
    const Index draws = 100000;
    RngStream r = root.substream("chisq");
    std::vector<double> vals(static_cast<std::size_t>(draws));
    parallel_for(draws, exec, [&](std::int64_t i) {
      RngStream s = r.substream(static_cast<std::uint64_t>(i));
      vals[static_cast<std::size_t>(i)] = sample_white_wishart(1, 5, s)(0, 0);
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(draws);
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (static_cast<double>(draws) - 1.0)) /
                      std::sqrt(static_cast<double>(draws));
    out.push_back({"W_1(5, 1) mean (chi-square, 5 dof)", std::abs(mean - 5.0) <= 3.0 * se, mean,
                   5.0, se, "within 3 SE of 5"});
  }
  return out;
}

std::vector<CheckResult> validate_scaling(std::uint64_t seed, Exec exec) {
  std::vector<CheckResult> out;
  RngStream root(seed);
  const Index p = 200;
  const Index k = 49;
  const Index delta_draws = 50;
  const Index frame_draws = 2000;

  {
    // Sigma = I + v v' with a fixed spike; the normalized projected
    // divergence concentrates at k/p under a spherical shift.
    RngStream r = root.substream("spiked");
    RngStream vstream = r.substream("spike");
    Vector v = gaussian_matrix(p, 1, vstream).col(0);
    v *= 2.0 / v.norm();
    RngStream realize_stream = r.substream("realize");
    RealizedCovariance cov =
        realize_covariance({IdentityPlusLowRank{Matrix(v)}, p}, realize_stream);

    double mean_ratio = 0.0;
    for (Index d = 0; d < delta_draws; ++d) {
      RngStream ds = r.substream("delta").substream(static_cast<std::uint64_t>(d));
      Vector z = gaussian_matrix(p, 1, ds).col(0);
      Vector delta = z / z.norm();
      McEstimate mc = delta_bar_k_mc(delta, cov, k, frame_draws,
                                     r.substream("frames").substream(static_cast<std::uint64_t>(d)),
                                     exec);
      mean_ratio += mc.estimate;  // |delta| = 1
    }
    mean_ratio /= static_cast<double>(delta_draws);
    const double target = static_cast<double>(k) / static_cast<double>(p);
    out.push_back({"spiked scaling: delta_bar_k / |delta|^2 vs k/p",
                   std::abs(mean_ratio / target - 1.0) <= 0.05, mean_ratio, target, 0.0,
                   "within 5% of k/p"});
  }
  {
    // Tilted shift over a rotated slow-decay spectrum concentrates at
    // k / tr(Sigma).
    RngStream r = root.substream("tilted");
    double mean_ratio = 0.0;
    double target = 0.0;
    for (Index d = 0; d < delta_draws; ++d) {
      RngStream rs = r.substream("realize").substream(static_cast<std::uint64_t>(d));
      RealizedCovariance cov = realize_covariance({RandomOrthoDecay{Decay::Slow}, p}, rs);
      target = static_cast<double>(k) / cov.spectrum.trace();
      RngStream ds = r.substream("delta").substream(static_cast<std::uint64_t>(d));
      Vector delta = sample_shift(ShiftModel{Tilted{TiltRule::FixedNorm, 2.0}}, cov, ds);
      McEstimate mc = delta_bar_k_mc(delta, cov, k, frame_draws,
                                     r.substream("frames").substream(static_cast<std::uint64_t>(d)),
                                     exec);
      mean_ratio += mc.estimate / delta.squaredNorm();
    }
    mean_ratio /= static_cast<double>(delta_draws);
    out.push_back({"tilted scaling: delta_bar_k / |delta|^2 vs k/tr(Sigma)",
                   std::abs(mean_ratio / target - 1.0) <= 0.10, mean_ratio, target, 0.0,
                   "within 10% of k/tr(Sigma)"});
  }
  {
    // Efficiency against the half-ratio reference equals 4 y (1-y) under
    // linear scaling, never exceeding 1 + 0.05.
    bool pass = true;
    double worst = 0.0;
    for (double y : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
      const double are = are_rp_vs_kstar(y, y, 0.5);  // delta_bar proportional to k
      worst = std::max(worst, are);
      if (std::abs(are - 4.0 * y * (1.0 - y)) > 1e-12) pass = false;
    }
    pass = pass && worst <= 1.0 + 0.05;
    out.push_back({"efficiency across projection ratios", pass, worst, 1.0, 0.0,
                   "equals 4 y (1-y), at most 1"});
  }
  return out;
}

}  // namespace rpmt
