#include "rpmt/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rpmt/errors.hpp"
#include "rpmt/normal.hpp"
#include "rpmt/sampling.hpp"

namespace rpmt {

namespace {

void check_power_inputs(double alpha, double b) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
  if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("sample ratio b must lie in (0, 1)");
}

McEstimate summarize(const std::vector<double>& vals) {
  const double m = static_cast<double>(vals.size());
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= m;
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  const double sd = m > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
  return McEstimate{mean, sd / std::sqrt(m)};
}

}  // namespace

double power_rp(const PowerParams& params) {
  check_power_inputs(params.alpha, params.b);
  if (!(params.y > 0.0 && params.y < 1.0)) {
    throw std::invalid_argument("power_rp: projection ratio y must lie in (0, 1)");
  }
  if (params.delta_bar_k < 0.0) throw std::invalid_argument("power_rp: delta_bar_k must be >= 0");
  const double drift = params.b * (1.0 - params.b) *
                       std::sqrt((1.0 - params.y) / (2.0 * params.y)) * params.delta_bar_k *
                       std::sqrt(params.n);
  return normal_cdf(-normal_quantile(1.0 - params.alpha) + drift);
}

double power_cq(double alpha, double b, double n, const Vector& delta,
                const RealizedCovariance& cov) {
  check_power_inputs(alpha, b);
  const double fro = cov.sigma.norm();
  if (!(fro > 0.0)) throw std::invalid_argument("power_cq: |Sigma|_F must be positive");
  const double drift = b * (1.0 - b) / std::sqrt(2.0) * delta.squaredNorm() * n / fro;
  return normal_cdf(-normal_quantile(1.0 - alpha) + drift);
}

double power_sd(double alpha, double b, double n, const Vector& delta,
                const RealizedCovariance& cov) {
  check_power_inputs(alpha, b);
  for (Index i = 0; i < cov.dim(); ++i) {
    if (!(cov.diag(i) > 0.0)) {
      throw DegenerateVarianceError("power_sd: zero variance at coordinate " + std::to_string(i),
                                    i);
    }
  }
  const double quad = (delta.array().square() / cov.diag.array()).sum();
  const double drift = b * (1.0 - b) / std::sqrt(2.0) * quad * n / cov.correlation.norm();
  return normal_cdf(-normal_quantile(1.0 - alpha) + drift);
}

double delta_k(const Vector& delta, const RealizedCovariance& cov, const Matrix& q) {
  Matrix m = q.transpose() * cov.sigma * q;
  Vector w = q.transpose() * delta;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("delta_k: projected covariance is not positive definite");
  }
  return w.dot(llt.solve(w));
}

McEstimate delta_bar_k_mc(const Vector& delta, const RealizedCovariance& cov, Index k, Index draws,
                          const RngStream& rng, Exec exec) {
  if (draws < 2) throw std::invalid_argument("delta_bar_k_mc: need at least 2 draws");
  std::vector<double> vals(static_cast<std::size_t>(draws));
  FirstError err;
  parallel_for(draws, exec, [&](std::int64_t i) {
    err.capture(i, [&] {
      RngStream draw = rng.substream(static_cast<std::uint64_t>(i));
      Matrix q = haar_frame(cov.dim(), k, draw);
      vals[static_cast<std::size_t>(i)] = delta_k(delta, cov, q);
    });
  });
  err.rethrow_if_any();
  return summarize(vals);
}

namespace {

double rp_drift_denominator(Index k, Index n, double delta_bar_k) {
  if (!(delta_bar_k > 0.0)) {
    throw std::invalid_argument("asymptotic relative efficiency is undefined at delta_bar_k = 0");
  }
  const double y = static_cast<double>(k) / static_cast<double>(n);
  return std::sqrt((1.0 - y) / y) * delta_bar_k * std::sqrt(static_cast<double>(n));
}

}  // namespace

double are_cq_rp(const Vector& delta, const RealizedCovariance& cov, Index k, Index n,
                 double delta_bar_k) {
  const double num = delta.squaredNorm() * static_cast<double>(n) / cov.sigma.norm();
  const double ratio = num / rp_drift_denominator(k, n, delta_bar_k);
  return ratio * ratio;
}

double are_sd_rp(const Vector& delta, const RealizedCovariance& cov, Index k, Index n,
                 double delta_bar_k) {
  const double quad = (delta.array().square() / cov.diag.array()).sum();
  const double num = quad * static_cast<double>(n) / cov.correlation.norm();
  const double ratio = num / rp_drift_denominator(k, n, delta_bar_k);
  return ratio * ratio;
}

double are_rp_vs_kstar(double y, double delta_bar_k, double delta_bar_kstar) {
  if (!(y > 0.0 && y < 1.0)) throw std::invalid_argument("are_rp_vs_kstar: y must lie in (0, 1)");
  if (!(delta_bar_k > 0.0) || !(delta_bar_kstar > 0.0)) {
    throw std::invalid_argument("are_rp_vs_kstar: delta_bar values must be positive");
  }
  const double num = (1.0 - y) / (2.0 * y) * delta_bar_k * delta_bar_k;
  const double den = 0.5 * delta_bar_kstar * delta_bar_kstar;  // y* = 1/2
  return num / den;
}

AreReport sufficient_condition_report(const RealizedCovariance& cov, Index n, double epsilon1,
                                      double margin) {
  if (!(epsilon1 > 0.0)) throw std::invalid_argument("sufficient_condition_report: epsilon1 > 0");
  AreReport out;
  out.summaries = covariance_summaries(cov);
  out.epsilon1 = epsilon1;
  out.c1 = 4.0 / epsilon1 * (1.0 + margin);
  const double nd = static_cast<double>(n);
  out.are_cq = 4.0 * out.summaries.cq_dim / nd;
  out.are_sd_unif = 4.0 * out.summaries.sd_unif / nd;
  out.are_sd_tilt = 4.0 * out.summaries.sd_tilt / nd;
  out.sufficient_cq = nd >= out.c1 * out.summaries.cq_dim;
  out.sufficient_sd_unif = nd >= out.c1 * out.summaries.sd_unif;
  out.sufficient_sd_tilt = nd >= out.c1 * out.summaries.sd_tilt;
  return out;
}

QuadformTailBound quadform_tail_bound(const Matrix& a, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("quadform_tail_bound: t must be positive");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  const double op = es.eigenvalues().maxCoeff();
  const double tr = a.trace();
  if (!(op > 0.0)) throw std::invalid_argument("quadform_tail_bound: |A|_op must be positive");
  const double rho = op / tr;
  QuadformTailBound out;
  const double up = 1.0 + t * std::sqrt(rho);
  out.upper_threshold = up * up;
  out.tail_bound = std::exp(-0.5 * t * t);
  if (t < std::sqrt(tr / op - 1.0)) {
    const double low = std::sqrt(1.0 - rho) - t * std::sqrt(rho);
    out.lower_threshold = low * low;
  }
  return out;
}

ProjectedInverseBounds projected_inverse_bounds_oracle(const RealizedCovariance& cov, Index k,
                                                       Index draws, const RngStream& rng,
                                                       Exec exec) {
  if (draws < 100) throw std::invalid_argument("projected_inverse_bounds_oracle: need >= 100 draws");
  const Index p = cov.dim();

  // Chunked accumulation keeps the draw-order reduction deterministic
  // without holding all p x p draw matrices at once.
  const Index chunk = 128;
  Matrix accum = Matrix::Zero(p, p);
  std::vector<double> traces(static_cast<std::size_t>(draws));
  std::vector<Matrix> block(static_cast<std::size_t>(chunk));
  FirstError err;
  for (Index start = 0; start < draws; start += chunk) {
    const Index count = std::min(chunk, draws - start);
    parallel_for(count, exec, [&](std::int64_t j) {
      err.capture(start + j, [&] {
        RngStream draw = rng.substream(static_cast<std::uint64_t>(start + j));
        Matrix q = haar_frame(p, k, draw);
        Eigen::LLT<Matrix> llt(Matrix(q.transpose() * cov.sigma * q));
        if (llt.info() != Eigen::Success) {
          throw std::runtime_error("projected_inverse_bounds_oracle: projected solve failed");
        }
        Matrix inv = llt.solve(Matrix::Identity(k, k));
        block[static_cast<std::size_t>(j)] = q * inv * q.transpose();
        traces[static_cast<std::size_t>(start + j)] = inv.trace();
      });
    });
    err.rethrow_if_any();
    for (Index j = 0; j < count; ++j) accum += block[static_cast<std::size_t>(j)];
  }
  accum /= static_cast<double>(draws);

  Eigen::SelfAdjointEigenSolver<Matrix> es(accum);
  const Index top = p - 1;
  Vector v = es.eigenvectors().col(top);

  // Second pass with the same substreams: per-draw quadratic form along the
  // estimated top eigendirection, for a Monte Carlo standard error of the
  // operator-norm estimate.
  std::vector<double> quads(static_cast<std::size_t>(draws));
  parallel_for(draws, exec, [&](std::int64_t i) {
    err.capture(i, [&] {
      RngStream draw = rng.substream(static_cast<std::uint64_t>(i));
      Matrix q = haar_frame(p, k, draw);
      Eigen::LLT<Matrix> llt(Matrix(q.transpose() * cov.sigma * q));
      Vector w = q.transpose() * v;
      quads[static_cast<std::size_t>(i)] = w.dot(llt.solve(w));
    });
  });
  err.rethrow_if_any();

  McEstimate trace_mc = summarize(traces);
  McEstimate quad_mc = summarize(quads);

  ProjectedInverseBounds out;
  out.op_norm_estimate = es.eigenvalues()(top);
  out.trace_estimate = trace_mc.estimate;
  out.op_bound = 1.0 / cov.spectrum.min();
  out.trace_bound = static_cast<double>(k) * static_cast<double>(p) / cov.spectrum.trace();
  out.op_std_error = quad_mc.std_error;
  out.trace_std_error = trace_mc.std_error;
  return out;
}

WishartMarginalOracle inverse_wishart_marginal_oracle(Index k, Index n, Index draws,
                                                      const RngStream& rng, Exec exec) {
  if (n <= k + 3) {
    throw std::invalid_argument(
        "inverse_wishart_marginal_oracle: variance is undefined unless n > k + 3");
  }
  if (draws < 2) throw std::invalid_argument("inverse_wishart_marginal_oracle: need >= 2 draws");
  std::vector<double> vals(static_cast<std::size_t>(draws));
  FirstError err;
  parallel_for(draws, exec, [&](std::int64_t i) {
    err.capture(i, [&] {
      RngStream draw = rng.substream(static_cast<std::uint64_t>(i));
      Matrix w = sample_white_wishart(k, n, draw);
      Eigen::LLT<Matrix> llt(w);
      if (llt.info() != Eigen::Success) {
        throw std::runtime_error("inverse_wishart_marginal_oracle: Wishart draw is singular");
      }
      Vector u = Vector::Zero(k);
      u(0) = 1.0;  // fixed unit vector; the marginal law is rotation invariant
      vals[static_cast<std::size_t>(i)] = u.dot(llt.solve(u));
    });
  });
  err.rethrow_if_any();

  McEstimate mc = summarize(vals);
  const double m = static_cast<double>(draws);
  double var = 0.0, m4 = 0.0;
  for (double v : vals) {
    const double d = v - mc.estimate;
    var += d * d;
    m4 += d * d * d * d;
  }
  var /= (m - 1.0);
  m4 /= m;

  WishartMarginalOracle out;
  const double dof = static_cast<double>(n - k - 1);
  out.mean = mc.estimate;
  out.variance = var;
  out.expected_mean = 1.0 / dof;
  out.expected_var = 2.0 / (dof * dof * static_cast<double>(n - k - 3));
  out.mean_std_error = mc.std_error;
  out.var_std_error = std::sqrt(std::max(m4 - var * var, 0.0) / m);
  return out;
}

}  // namespace rpmt
