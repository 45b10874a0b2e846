#include "rpmt/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "rpmt/errors.hpp"
#include "rpmt/normal.hpp"

namespace rpmt {

namespace {

TestOutcome finish(const TwoSampleData& data, const char* method, double statistic, double z,
                   double alpha) {
  TestOutcome out;
  out.method = method;
  out.statistic = statistic;
  out.z_score = z;
  out.p_value = 1.0 - normal_cdf(z);
  out.reject = out.p_value <= alpha;
  out.alpha = alpha;
  out.n1 = data.n1();
  out.n2 = data.n2();
  out.p = data.dim();
  return out;
}

// Leave-two-out estimate of tr(Sigma^2) from one group's Gram matrix.
double trace_sigma_sq_hat(const Matrix& gram, Index m) {
  const double denom = static_cast<double>(m - 2);
  Vector rowsum = gram.rowwise().sum();
  double acc = 0.0;
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < m; ++k) {
      if (j == k) continue;
      // x_j' (x_k - mean excluding j,k) and x_k' (x_j - mean excluding j,k)
      const double cjk = gram(j, k) - (rowsum(j) - gram(j, j) - gram(j, k)) / denom;
      const double ckj = gram(j, k) - (rowsum(k) - gram(k, k) - gram(j, k)) / denom;
      acc += cjk * ckj;
    }
  }
  return acc / (static_cast<double>(m) * static_cast<double>(m - 1));
}

// Leave-one-out estimate of tr(Sigma_1 Sigma_2) from the cross Gram matrix.
double trace_cross_hat(const Matrix& cross, Index m1, Index m2) {
  Vector rowsum = cross.rowwise().sum();  // x_j' sum(y)
  Vector colsum = cross.colwise().sum();  // y_k' sum(x)
  double acc = 0.0;
  for (Index j = 0; j < m1; ++j) {
    for (Index k = 0; k < m2; ++k) {
      const double a = cross(j, k) - (colsum(k) - cross(j, k)) / static_cast<double>(m1 - 1);
      const double b = cross(j, k) - (rowsum(j) - cross(j, k)) / static_cast<double>(m2 - 1);
      acc += a * b;
    }
  }
  return acc / (static_cast<double>(m1) * static_cast<double>(m2));
}

}  // namespace

TestOutcome bs_statistic(const TwoSampleData& data, double alpha) {
  PooledStats stats = pooled_stats(data);
  const double n = static_cast<double>(data.dof());
  const double tau = 1.0 / static_cast<double>(data.n1()) + 1.0 / static_cast<double>(data.n2());
  const double tr_s = stats.sigma_hat.trace();
  const double tr_s_sq = stats.sigma_hat.squaredNorm();
  // Unbiased for tr(Sigma^2) under Wishart sampling.
  const double b_sq = n * n / ((n + 2.0) * (n - 1.0)) * (tr_s_sq - tr_s * tr_s / n);
  const double var = 2.0 * (n + 1.0) / n * tau * tau * b_sq;
  if (!(var > 0.0)) {
    throw DegenerateVarianceError("bs_statistic: null variance estimate is not positive");
  }
  const double statistic = stats.mean_diff.squaredNorm() - tau * tr_s;
  return finish(data, "bs", statistic, statistic / std::sqrt(var), alpha);
}

double cq_numerator(const TwoSampleData& data) {
  const Index m1 = data.n1();
  const Index m2 = data.n2();
  Matrix gx = data.x * data.x.transpose();
  Matrix gy = data.y * data.y.transpose();
  Matrix cross = data.x * data.y.transpose();
  const double t1 = (gx.sum() - gx.trace()) / (static_cast<double>(m1) * (m1 - 1));
  const double t2 = (gy.sum() - gy.trace()) / (static_cast<double>(m2) * (m2 - 1));
  const double t3 = 2.0 * cross.sum() / (static_cast<double>(m1) * static_cast<double>(m2));
  return t1 + t2 - t3;
}

TestOutcome cq_statistic(const TwoSampleData& data, double alpha) {
  const Index m1 = data.n1();
  const Index m2 = data.n2();
  if (m1 < 3 || m2 < 3) {
    throw std::invalid_argument("cq_statistic: variance estimate needs at least 3 observations per group");
  }
  const double statistic = cq_numerator(data);
  Matrix gx = data.x * data.x.transpose();
  Matrix gy = data.y * data.y.transpose();
  Matrix cross = data.x * data.y.transpose();
  const double tr11 = trace_sigma_sq_hat(gx, m1);
  const double tr22 = trace_sigma_sq_hat(gy, m2);
  const double tr12 = trace_cross_hat(cross, m1, m2);
  const double var = 2.0 / (static_cast<double>(m1) * (m1 - 1)) * tr11 +
                     2.0 / (static_cast<double>(m2) * (m2 - 1)) * tr22 +
                     4.0 / (static_cast<double>(m1) * static_cast<double>(m2)) * tr12;
  if (!(var > 0.0)) {
    throw DegenerateVarianceError("cq_statistic: null variance estimate is not positive");
  }
  return finish(data, "cq", statistic, statistic / std::sqrt(var), alpha);
}

TestOutcome sd_statistic(const TwoSampleData& data, double alpha) {
  PooledStats stats = pooled_stats(data);
  const Index p = data.dim();
  const double n = static_cast<double>(data.dof());
  if (n <= 2.0) {
    throw std::invalid_argument("sd_statistic: needs n1 + n2 - 2 > 2");
  }
  const double max_var = stats.sigma_hat.diagonal().maxCoeff();
  for (Index i = 0; i < p; ++i) {
    if (!(stats.sigma_hat(i, i) > 1e-12 * max_var)) {
      throw DegenerateVarianceError(
          "sd_statistic: degenerate sample variance at coordinate " + std::to_string(i), i);
    }
  }
  Vector inv_sd = stats.sigma_hat.diagonal().cwiseSqrt().cwiseInverse();
  Matrix r_hat = inv_sd.asDiagonal() * stats.sigma_hat * inv_sd.asDiagonal();
  const double tr_r_sq = r_hat.squaredNorm();
  const double n1 = static_cast<double>(data.n1());
  const double n2 = static_cast<double>(data.n2());
  const double pd = static_cast<double>(p);
  const double statistic =
      n1 * n2 / (n1 + n2) *
      (stats.mean_diff.array().square() / stats.sigma_hat.diagonal().array()).sum();
  const double adj = 1.0 + tr_r_sq / std::pow(pd, 1.5);  // small-sample correction factor
  const double var = 2.0 * (tr_r_sq - pd * pd / n) * adj;
  if (!(var > 0.0)) {
    throw DegenerateVarianceError("sd_statistic: null variance estimate is not positive");
  }
  const double z = (statistic - n * pd / (n - 2.0)) / std::sqrt(var);
  return finish(data, "sd", statistic, z, alpha);
}

}  // namespace rpmt
