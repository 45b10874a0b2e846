#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rpmt/errors.hpp"
#include "rpmt/models.hpp"
#include "rpmt/normal.hpp"
#include "rpmt/rp_test.hpp"
#include "rpmt/sampling.hpp"

using namespace rpmt;

namespace {

TwoSampleData make_dataset(Index n1, Index n2, Index p, std::uint64_t seed) {
  RngStream rng(seed);
  return make_two_sample(gaussian_matrix(n1, p, rng), gaussian_matrix(n2, p, rng));
}

}  // namespace

TEST_CASE("pooled statistics match a hand-computed example") {
  Matrix x(2, 1), y(2, 1);
  x << 0.0, 2.0;
  y << 1.0, 3.0;
  PooledStats s = pooled_stats(make_two_sample(x, y));
  CHECK(s.mean_diff(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(s.sigma_hat(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("constant data pools to a zero covariance") {
  Matrix x = Matrix::Constant(3, 4, 2.5);
  Matrix y = Matrix::Constant(5, 4, 2.5);
  PooledStats s = pooled_stats(make_two_sample(x, y));
  CHECK(s.mean_diff.norm() == 0.0);
  CHECK(s.sigma_hat.norm() == 0.0);
}

TEST_CASE("pooled covariance is symmetric positive semidefinite") {
  TwoSampleData data = make_dataset(8, 6, 3, 100);
  PooledStats s = pooled_stats(data);
  CHECK(s.sigma_hat.isApprox(s.sigma_hat.transpose(), 1e-14));
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.sigma_hat, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("two-sample validation rejects short, ragged or non-finite input") {
  RngStream rng(4);
  CHECK_THROWS_AS(make_two_sample(gaussian_matrix(1, 3, rng), gaussian_matrix(4, 3, rng)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_two_sample(gaussian_matrix(4, 3, rng), gaussian_matrix(4, 2, rng)),
                  std::invalid_argument);
  Matrix bad = gaussian_matrix(4, 3, rng);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_two_sample(bad, gaussian_matrix(4, 3, rng)), std::invalid_argument);
}

TEST_CASE("critical value closed form") {
  // median case: the quantile term vanishes
  CHECK(critical_value(0.5, 49, 98) == doctest::Approx(98.0).epsilon(1e-12));
  // frozen evaluation with the published 95% normal quantile
  const double expected = 98.0 + std::sqrt(8.0) * std::sqrt(98.0) * 1.6448536269514722;
  CHECK(critical_value(0.05, 49, 98) == doctest::Approx(expected).epsilon(1e-10));
  // decreasing in alpha towards -inf
  CHECK(critical_value(0.9, 49, 98) < critical_value(0.5, 49, 98));
  CHECK(critical_value(0.999, 49, 98) < critical_value(0.9, 49, 98));
  CHECK_THROWS_AS(critical_value(0.05, 98, 98), std::invalid_argument);
  CHECK_THROWS_AS(critical_value(0.0, 10, 98), std::invalid_argument);
}

TEST_CASE("full projection reduces to the classical statistic") {
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    TwoSampleData data = make_dataset(15, 15, 20, seed);
    RngStream proj(seed + 100);
    const double rp = rp_statistic(data, 20, 3, proj);
    const double hotelling = hotelling_statistic(data);
    CHECK(rp == doctest::Approx(hotelling).epsilon(1e-8));
  }
}

TEST_CASE("zero mean difference zeroes the statistic") {
  RngStream rng(10);
  Matrix x = gaussian_matrix(6, 5, rng);
  Matrix y = x;  // identical groups: the mean difference vanishes exactly
  RngStream proj(11);
  CHECK(rp_statistic(make_two_sample(x, y), 3, 5, proj) == 0.0);
}

TEST_CASE("swapping the groups leaves statistic and p-value unchanged") {
  TwoSampleData data = make_dataset(12, 9, 30, 12);
  TwoSampleData swapped{data.y, data.x};
  RngStream proj(13);
  TestOutcome a = run_rp_test(data, 10, 20, 0.05, proj);
  TestOutcome b = run_rp_test(swapped, 10, 20, 0.05, proj);
  CHECK(a.statistic == b.statistic);
  CHECK(a.p_value == b.p_value);
}

TEST_CASE("statistic is nonnegative and deterministic per stream") {
  TwoSampleData data = make_dataset(10, 10, 40, 14);
  RngStream proj(15);
  const double v1 = rp_statistic(data, 9, 16, proj);
  const double v2 = rp_statistic(data, 9, 16, proj);
  CHECK(v1 >= 0.0);
  CHECK(v1 == v2);
}

TEST_CASE("serial and OpenMP paths produce bit-identical statistics") {
  TwoSampleData data = make_dataset(20, 18, 60, 16);
  RngStream proj(17);
  const double serial = rp_statistic(data, 15, 64, proj, Exec::Serial);
  const double parallel = rp_statistic(data, 15, 64, proj, Exec::OpenMP);
  CHECK(serial == parallel);
}

TEST_CASE("projection dimension is validated") {
  TwoSampleData data = make_dataset(6, 6, 4, 18);  // n = 10, p = 4
  RngStream proj(19);
  CHECK_THROWS_AS(rp_statistic(data, 5, 4, proj), std::invalid_argument);
  CHECK_THROWS_AS(rp_statistic(data, 0, 4, proj), std::invalid_argument);
  CHECK_THROWS_AS(rp_statistic(data, 2, 0, proj), std::invalid_argument);
  TwoSampleData wide = make_dataset(4, 4, 10, 20);  // n = 6 < p
  CHECK_THROWS_AS(rp_statistic(wide, 7, 4, proj), std::invalid_argument);
  CHECK(default_projection_dim(wide) == 3);
  CHECK(default_projection_dim(make_dataset(30, 30, 10, 21)) == 10);  // clamped to p
}

TEST_CASE("constant data triggers the projected-singularity error with its draw index") {
  Matrix x = Matrix::Constant(4, 6, 1.0);
  Matrix y = Matrix::Constant(4, 6, 2.0);
  RngStream proj(22);
  CHECK_THROWS_AS(rp_statistic(make_two_sample(x, y), 2, 3, proj), ProjectedSingularityError);
  try {
    rp_statistic(make_two_sample(x, y), 2, 3, proj);
  } catch (const ProjectedSingularityError& e) {
    CHECK(e.projection_index() == 0);  // lowest failing draw wins deterministically
  }
}

TEST_CASE("outcome wiring: z-score, p-value and rejection are consistent") {
  TwoSampleData data = make_dataset(25, 25, 35, 23);
  RngStream proj(24);
  TestOutcome out = run_rp_test(data, 24, 32, 0.05, proj);
  const Index n = data.dof();
  CHECK(out.z_score ==
        doctest::Approx((out.statistic - null_mean(24, n)) / null_sd(24, n)).epsilon(1e-14));
  CHECK(out.p_value == doctest::Approx(1.0 - normal_cdf(out.z_score)).epsilon(1e-14));
  CHECK(out.reject == (out.p_value <= 0.05));
  CHECK(out.reject == (out.statistic >= critical_value(0.05, 24, n) - 1e-9));
  CHECK(out.method == "rp");
  CHECK(out.k == 24);
  CHECK(out.projections == 32);
}

TEST_CASE("classical statistic requires p <= n and reduces to the t-statistic at p = 1") {
  TwoSampleData wide = make_dataset(4, 4, 10, 25);
  CHECK_THROWS_AS(hotelling_statistic(wide), std::invalid_argument);

  TwoSampleData scalar = make_dataset(7, 5, 1, 26);
  PooledStats s = pooled_stats(scalar);
  const double expected =
      7.0 * 5.0 / 12.0 * s.mean_diff(0) * s.mean_diff(0) / s.sigma_hat(0, 0);
  CHECK(hotelling_statistic(scalar) == doctest::Approx(expected).epsilon(1e-12));

  TestOutcome out = run_hotelling_test(scalar, 0.05);
  CHECK(out.method == "hotelling");
  CHECK(out.k == 1);
}

TEST_CASE("Monte Carlo averaging variance shrinks like one over N") {
  TwoSampleData data = make_dataset(20, 20, 60, 27);
  RngStream root(28);
  auto sample_variance = [&](Index n_proj, std::uint64_t tag) {
    const int reps = 200;
    std::vector<double> vals(reps);
    for (int i = 0; i < reps; ++i) {
      RngStream s = root.substream(tag).substream(static_cast<std::uint64_t>(i));
      vals[i] = rp_statistic(data, 15, n_proj, s);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= reps;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    return ss / (reps - 1);
  };
  const double ratio = sample_variance(100, 1) / sample_variance(400, 2);
  CHECK(ratio >= 2.5);
  CHECK(ratio <= 6.0);
}

TEST_CASE("statistic distribution is invariant under rotation of the data") {
  // Kolmogorov-Smirnov distance between single-projection statistics on a
  // dataset and on its fixed rotation stays small.
  const Index p = 8, k = 4;
  TwoSampleData data = make_dataset(10, 10, p, 29);
  RngStream urot(30);
  Matrix u = haar_frame(p, p, urot);
  TwoSampleData rotated{data.x * u.transpose(), data.y * u.transpose()};

  const int draws = 5000;
  std::vector<double> a(draws), b(draws);
  RngStream root(31);
  for (int i = 0; i < draws; ++i) {
    RngStream s1 = root.substream("plain").substream(static_cast<std::uint64_t>(i));
    RngStream s2 = root.substream("rotated").substream(static_cast<std::uint64_t>(i));
    a[i] = rp_statistic(data, k, 1, s1);
    b[i] = rp_statistic(rotated, k, 1, s2);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double ks = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
    ks = std::max(ks, std::abs(static_cast<double>(ia) / draws - static_cast<double>(ib) / draws));
  }
  CHECK(ks < 0.05);
}
