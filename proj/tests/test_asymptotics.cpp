#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rpmt/asymptotics.hpp"
#include "rpmt/errors.hpp"
#include "rpmt/models.hpp"
#include "rpmt/normal.hpp"
#include "rpmt/sampling.hpp"

using namespace rpmt;

namespace {

double phi_oracle(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

RealizedCovariance realize(const CovarianceModel& model, std::uint64_t seed) {
  RngStream rng(seed);
  return realize_covariance(model, rng);
}

}  // namespace

TEST_CASE("normal quantile matches the published table values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(normal_quantile(0.9) - 1.2815515655446004) < 1e-12);
  CHECK(std::abs(normal_quantile(0.95) - 1.6448536269514722) < 1e-12);
  CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-12);
  CHECK(std::abs(normal_quantile(0.99) - 2.3263478740408408) < 1e-12);
  for (double p : {1e-9, 0.013, 0.31, 0.5, 0.77, 0.9973, 1.0 - 1e-9}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
}

TEST_CASE("projected power at zero divergence equals the level") {
  for (double alpha : {0.01, 0.05, 0.2}) {
    CHECK(power_rp({alpha, 0.5, 0.5, 100.0, 0.0}) == doctest::Approx(alpha).epsilon(1e-12));
  }
}

TEST_CASE("projected power frozen example and monotonicity") {
  const double beta = power_rp({0.05, 0.5, 0.5, 100.0, 0.4});
  const double expected = phi_oracle(-1.6448536269514722 + 0.25 * std::sqrt(0.5) * 0.4 * 10.0);
  CHECK(beta == doctest::Approx(expected).epsilon(1e-10));
  CHECK(beta == doctest::Approx(0.174).epsilon(2e-3));

  CHECK(power_rp({0.05, 0.5, 0.5, 100.0, 0.5}) > beta);
  CHECK(power_rp({0.05, 0.5, 0.5, 144.0, 0.4}) > beta);
  CHECK(power_rp({0.10, 0.5, 0.5, 100.0, 0.4}) > beta);
}

TEST_CASE("competing power functions: zero shift, identity reduction, frozen value") {
  RealizedCovariance eye = realize({IdentityCov{}, 20}, 1);
  Vector zero = Vector::Zero(20);
  CHECK(power_cq(0.05, 0.5, 100.0, zero, eye) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(power_sd(0.05, 0.5, 100.0, zero, eye) == doctest::Approx(0.05).epsilon(1e-12));

  RngStream rng(2);
  Vector delta = gaussian_matrix(20, 1, rng).col(0);
  CHECK(power_cq(0.05, 0.4, 50.0, delta, eye) ==
        doctest::Approx(power_sd(0.05, 0.4, 50.0, delta, eye)).epsilon(1e-14));

  // |delta|^2 = 1, |Sigma|_F = 50, n = 98, b = 1/2
  RealizedCovariance slow = realize({DiagonalDecay{Decay::Slow}, 200}, 3);
  Vector unit = Vector::Zero(200);
  unit(0) = 1.0;
  const double beta = power_cq(0.05, 0.5, 98.0, unit, slow);
  const double expected = phi_oracle(-1.6448536269514722 + 0.25 / std::sqrt(2.0) * 98.0 / 50.0);
  CHECK(beta == doctest::Approx(expected).epsilon(1e-10));
  CHECK(beta == doctest::Approx(0.0971).epsilon(2e-3));
}

TEST_CASE("projected divergence: full frame, zero shift, identity average") {
  RealizedCovariance cov = realize({RandomOrthoDecay{Decay::Fast}, 15}, 4);
  RngStream rng(5);
  Matrix q = haar_frame(15, 15, rng);
  Vector delta = gaussian_matrix(15, 1, rng).col(0);

  Eigen::LLT<Matrix> llt(cov.sigma);
  const double full = delta.dot(llt.solve(delta));
  CHECK(delta_k(delta, cov, q) == doctest::Approx(full).epsilon(1e-10));
  CHECK(delta_k(Vector::Zero(15), cov, q) == 0.0);

  // with Sigma = I the projected divergence is the squared frame image,
  // with Haar mean (k/p) |delta|^2
  RealizedCovariance eye = realize({IdentityCov{}, 40}, 6);
  Vector d40 = gaussian_matrix(40, 1, rng).col(0);
  const Index draws = 10000;
  double sum = 0.0, sumsq = 0.0;
  RngStream root(7);
  for (Index i = 0; i < draws; ++i) {
    RngStream s = root.substream(static_cast<std::uint64_t>(i));
    Matrix frame = haar_frame(40, 10, s);
    const double v = delta_k(d40, eye, frame);
    CHECK(v == doctest::Approx((frame.transpose() * d40).squaredNorm()).epsilon(1e-12));
    sum += v;
    sumsq += v * v;
  }
  const double m = static_cast<double>(draws);
  const double mean = sum / m;
  const double se = std::sqrt((sumsq / m - mean * mean) / m);
  CHECK(std::abs(mean - 0.25 * d40.squaredNorm()) <= 3.0 * se);
}

TEST_CASE("projection never increases the divergence") {
  RngStream root(8);
  for (int trial = 0; trial < 100; ++trial) {
    RngStream s = root.substream(static_cast<std::uint64_t>(trial));
    const Index p = 3 + trial % 18;
    const Index k = 1 + trial % p;
    Matrix base = gaussian_matrix(p, p + 2, s);
    Matrix sigma = base * base.transpose() / static_cast<double>(p + 2) +
                   0.1 * Matrix::Identity(p, p);
    RealizedCovariance cov = realize({ExplicitDense{sigma}, p}, 9 + trial);
    Vector delta = gaussian_matrix(p, 1, s).col(0);
    Matrix q = haar_frame(p, k, s);
    Eigen::LLT<Matrix> llt(cov.sigma);
    CHECK(delta_k(delta, cov, q) <= delta.dot(llt.solve(delta)) + 1e-10);
  }
}

TEST_CASE("divergence Monte Carlo at the full frame is exact") {
  RealizedCovariance cov = realize({DiagonalDecay{Decay::Fast}, 12}, 10);
  RngStream rng(11);
  Vector delta = gaussian_matrix(12, 1, rng).col(0);
  McEstimate mc = delta_bar_k_mc(delta, cov, 12, 50, rng.substream("frames"));
  Eigen::LLT<Matrix> llt(cov.sigma);
  CHECK(mc.estimate == doctest::Approx(delta.dot(llt.solve(delta))).epsilon(1e-10));
  CHECK(mc.std_error < 1e-10);
}

TEST_CASE("efficiency ratios are scale free and need a positive divergence") {
  RealizedCovariance cov = realize({RandomOrthoDecay{Decay::Slow}, 30}, 12);
  RngStream rng(13);
  Vector delta = gaussian_matrix(30, 1, rng).col(0);
  const double a1 = are_cq_rp(delta, cov, 10, 28, 0.7);
  const double a2 = are_cq_rp(5.0 * delta, cov, 10, 28, 0.7 * 25.0);  // delta_bar scales with |d|^2
  CHECK(a1 == doctest::Approx(a2).epsilon(1e-12));
  const double s1 = are_sd_rp(delta, cov, 10, 28, 0.7);
  const double s2 = are_sd_rp(5.0 * delta, cov, 10, 28, 0.7 * 25.0);
  CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
  CHECK_THROWS_AS(are_cq_rp(delta, cov, 10, 28, 0.0), std::invalid_argument);
}

TEST_CASE("efficiency against the identity covariance from first principles") {
  // Sigma = I at p = 50: delta_bar = (k/p) |delta|^2 exactly in expectation,
  // so the ratio can be assembled by hand.
  RealizedCovariance eye = realize({IdentityCov{}, 50}, 14);
  RngStream rng(15);
  Vector delta = gaussian_matrix(50, 1, rng).col(0);
  const Index k = 10, n = 40;
  const double dbar = (10.0 / 50.0) * delta.squaredNorm();
  const double y = 10.0 / 40.0;
  const double num = delta.squaredNorm() * 40.0 / std::sqrt(50.0);
  const double den = std::sqrt((1.0 - y) / y) * dbar * std::sqrt(40.0);
  CHECK(are_cq_rp(delta, eye, k, n, dbar) ==
        doctest::Approx((num / den) * (num / den)).epsilon(1e-12));
  // the diagonally standardized comparison coincides at the identity
  CHECK(are_sd_rp(delta, eye, k, n, dbar) ==
        doctest::Approx(are_cq_rp(delta, eye, k, n, dbar)).epsilon(1e-12));
}

TEST_CASE("efficiency across projection ratios peaks at one half") {
  CHECK(are_rp_vs_kstar(0.5, 0.7, 0.7) == doctest::Approx(1.0).epsilon(1e-14));
  // linear scaling in k: delta_bar proportional to y at fixed n
  CHECK(are_rp_vs_kstar(0.1, 0.1, 0.5) == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(are_rp_vs_kstar(0.9, 0.9, 0.5) == doctest::Approx(0.36).epsilon(1e-12));
  for (double y : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    CHECK(are_rp_vs_kstar(y, y, 0.5) <= 1.0 + 1e-12);
  }
}

TEST_CASE("sufficiency report reproduces the tabulated decisions") {
  // block: 98 < 4.04 * 56.18 -> insufficient at epsilon = 1
  AreReport block = sufficient_condition_report(realize({Block{40, 5, 0.8}, 200}, 16), 98, 1.0);
  CHECK_FALSE(block.sufficient_cq);
  CHECK(block.c1 == doctest::Approx(4.04).epsilon(1e-12));

  // fast decay: threshold about 25.3 <= 98 -> sufficient at epsilon = 4
  AreReport fast =
      sufficient_condition_report(realize({DiagonalDecay{Decay::Fast}, 200}, 17), 98, 4.0);
  CHECK(fast.sufficient_cq);
  CHECK(fast.are_cq == doctest::Approx(4.0 * fast.summaries.cq_dim / 98.0).epsilon(1e-12));

  // identity at p = 200: the uniform-shift comparison cannot be satisfied
  AreReport eye = sufficient_condition_report(realize({IdentityCov{}, 200}, 18), 98, 4.0);
  CHECK(eye.summaries.sd_unif == doctest::Approx(200.0).epsilon(1e-12));
  CHECK_FALSE(eye.sufficient_sd_unif);
}

TEST_CASE("quadratic-form thresholds: closed forms and degenerate ranges") {
  Matrix eye = Matrix::Identity(100, 100);
  QuadformTailBound b = quadform_tail_bound(eye, 2.0);
  CHECK(b.upper_threshold == doctest::Approx(1.44).epsilon(1e-12));
  CHECK(b.tail_bound == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(b.lower_threshold.has_value());

  RngStream rng(19);
  Vector v = gaussian_matrix(10, 1, rng).col(0);
  Matrix rank1 = v * v.transpose();
  QuadformTailBound r1 = quadform_tail_bound(rank1, 0.5);
  CHECK_FALSE(r1.lower_threshold.has_value());  // tr(A) = |A|_op leaves no room

  QuadformTailBound tiny = quadform_tail_bound(eye, 1e-8);
  CHECK(tiny.upper_threshold == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(tiny.tail_bound == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(quadform_tail_bound(eye, 0.0), std::invalid_argument);
}

TEST_CASE("projected-inverse oracle saturates at the identity") {
  RealizedCovariance eye = realize({IdentityCov{}, 40}, 20);
  RngStream rng(21);
  ProjectedInverseBounds b = projected_inverse_bounds_oracle(eye, 8, 200, rng);
  CHECK(b.trace_estimate == doctest::Approx(8.0).epsilon(1e-10));
  CHECK(b.trace_bound == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(b.op_norm_estimate <= 1.0 + 1e-10);
  CHECK(b.op_bound == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverse-Wishart marginal oracle against the scalar chi-square law") {
  RngStream rng(22);
  WishartMarginalOracle w = inverse_wishart_marginal_oracle(1, 10, 20000, rng);
  CHECK(w.expected_mean == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  CHECK(std::abs(w.mean - w.expected_mean) <= 3.0 * w.mean_std_error);
  CHECK_THROWS_AS(inverse_wishart_marginal_oracle(20, 23, 100, rng), std::invalid_argument);
}

TEST_CASE("spherical shifts keep the divergence ratio near its floor") {
  // At the identity covariance the normalized divergence concentrates far
  // above 0.9 k / tr(Sigma); at least 95% of shift draws must clear it.
  RealizedCovariance eye = realize({IdentityCov{}, 200}, 23);
  RngStream root(24);
  const Index k = 49;
  const double floor_value = 0.9 * 49.0 / 200.0;
  const int draws = 200;
  int cleared = 0;
  for (int d = 0; d < draws; ++d) {
    RngStream ds = root.substream("delta").substream(static_cast<std::uint64_t>(d));
    Vector delta = sample_shift(ShiftModel{UniformSphere{1.0}}, eye, ds);
    McEstimate mc = delta_bar_k_mc(delta, eye, k, 64,
                                   root.substream("frames").substream(static_cast<std::uint64_t>(d)));
    cleared += mc.estimate >= floor_value ? 1 : 0;
  }
  CHECK(static_cast<double>(cleared) / draws > 0.95);
}
