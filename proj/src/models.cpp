#include "rpmt/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rpmt/errors.hpp"
#include "rpmt/sampling.hpp"

namespace rpmt {

Spectrum build_spectrum(Index p, Decay decay) {
  if (p < 2) throw std::invalid_argument("build_spectrum: dimension must be >= 2");
  const double power = decay == Decay::Fast ? 15.0 : 6.0;
  Vector values(p);
  const double step = 0.99 / static_cast<double>(p - 1);
  for (Index i = 0; i < p; ++i) {
    const double base = 0.01 + step * static_cast<double>(i);
    values(i) = std::pow(base, power) + 0.001;
  }
  values *= 50.0 / std::sqrt(values.squaredNorm());
  std::sort(values.data(), values.data() + p, std::greater<double>());
  return Spectrum{std::move(values)};
}

bool covariance_is_random(const CovarianceModel& model) {
  return std::holds_alternative<RandomOrthoDecay>(model.kind);
}

namespace {

RealizedCovariance finish_from_sigma(Matrix sigma, Matrix sqrt_factor, Spectrum spectrum) {
  RealizedCovariance out;
  out.diag = sigma.diagonal();
  Vector inv_sd = out.diag.cwiseSqrt().cwiseInverse();
  out.correlation = inv_sd.asDiagonal() * sigma * inv_sd.asDiagonal();
  out.correlation.diagonal().setOnes();
  out.sigma = std::move(sigma);
  out.sqrt_factor = std::move(sqrt_factor);
  out.spectrum = std::move(spectrum);
  return out;
}

// Symmetric eigendecomposition route for matrices given explicitly.
RealizedCovariance realize_dense(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols()) {
    throw std::invalid_argument("realize_covariance: explicit matrix must be square");
  }
  if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
    throw std::invalid_argument("realize_covariance: explicit matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("realize_covariance: eigendecomposition failed");
  }
  Vector evals = es.eigenvalues();
  if (evals.minCoeff() <= 0.0) {
    throw std::invalid_argument("realize_covariance: matrix is not positive definite");
  }
  Matrix sqrt_factor =
      es.eigenvectors() * evals.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  Vector ordered = evals.reverse();
  return finish_from_sigma(sigma, std::move(sqrt_factor), Spectrum{std::move(ordered)});
}

}  // namespace

RealizedCovariance realize_covariance(const CovarianceModel& model, RngStream& rng) {
  const Index p = model.dim;
  if (p < 1) throw std::invalid_argument("realize_covariance: dimension must be >= 1");

  if (const auto* diag = std::get_if<DiagonalDecay>(&model.kind)) {
    Spectrum spec = build_spectrum(p, diag->decay);
    Matrix sigma = spec.values.asDiagonal();
    Matrix sqrt_factor = spec.values.cwiseSqrt().asDiagonal();
    return finish_from_sigma(std::move(sigma), std::move(sqrt_factor), std::move(spec));
  }
  if (const auto* ortho = std::get_if<RandomOrthoDecay>(&model.kind)) {
    Spectrum spec = build_spectrum(p, ortho->decay);
    Matrix u = haar_frame(p, p, rng);
    Matrix sqrt_factor = u * spec.values.cwiseSqrt().asDiagonal();
    Matrix sigma = sqrt_factor * sqrt_factor.transpose();
    return finish_from_sigma(std::move(sigma), std::move(sqrt_factor), std::move(spec));
  }
  if (const auto* block = std::get_if<Block>(&model.kind)) {
    const Index m = block->blocks;
    const Index d = block->block_size;
    const double rho = block->rho;
    if (m < 1 || d < 1 || m * d != p) {
      throw std::invalid_argument("realize_covariance: block layout must satisfy m * d = p");
    }
    if (d > 1 && !(rho > -1.0 / static_cast<double>(d - 1) && rho < 1.0)) {
      throw std::invalid_argument("realize_covariance: block correlation outside (-1/(d-1), 1)");
    }
    Matrix sigma = Matrix::Zero(p, p);
    Matrix b = Matrix::Constant(d, d, rho);
    b.diagonal().setOnes();
    for (Index i = 0; i < m; ++i) sigma.block(i * d, i * d, d, d) = b;
    return realize_dense(sigma);
  }
  if (std::holds_alternative<IdentityCov>(model.kind)) {
    return finish_from_sigma(Matrix::Identity(p, p), Matrix::Identity(p, p),
                             Spectrum{Vector::Ones(p)});
  }
  if (const auto* dense = std::get_if<ExplicitDense>(&model.kind)) {
    if (dense->sigma.rows() != p) {
      throw std::invalid_argument("realize_covariance: explicit matrix dimension mismatch");
    }
    return realize_dense(dense->sigma);
  }
  const auto& lowrank = std::get<IdentityPlusLowRank>(model.kind);
  if (lowrank.factor.rows() != p) {
    throw std::invalid_argument("realize_covariance: low-rank factor dimension mismatch");
  }
  Matrix sigma = Matrix::Identity(p, p);
  sigma.noalias() += lowrank.factor * lowrank.factor.transpose();
  return realize_dense(sigma);
}

Vector sample_shift(const ShiftModel& model, const RealizedCovariance& cov, RngStream& rng) {
  const Index p = cov.dim();
  if (std::holds_alternative<Zero>(model.kind)) return Vector::Zero(p);

  if (const auto* sphere = std::get_if<UniformSphere>(&model.kind)) {
    if (!(sphere->scale > 0.0)) throw std::invalid_argument("sample_shift: scale must be positive");
    Vector z = gaussian_matrix(p, 1, rng).col(0);
    return sphere->scale * z / z.norm();
  }
  if (const auto* tilt = std::get_if<Tilted>(&model.kind)) {
    Vector z = gaussian_matrix(p, 1, rng).col(0);
    Vector sz = cov.sqrt_factor * z;
    if (tilt->rule == TiltRule::FixedNorm) {
      if (!(tilt->scale > 0.0)) throw std::invalid_argument("sample_shift: scale must be positive");
      return tilt->scale * sz / sz.norm();
    }
    const double s = std::sqrt(cov.spectrum.trace()) / 2.0;
    return std::sqrt(s) * sz;
  }
  const auto& explicit_v = std::get<ExplicitVector>(model.kind);
  if (explicit_v.v.size() != p) {
    throw std::invalid_argument("sample_shift: explicit vector dimension mismatch");
  }
  return explicit_v.v;
}

CovSummaries covariance_summaries(const RealizedCovariance& cov) {
  const Index p = cov.dim();
  for (Index i = 0; i < p; ++i) {
    if (!(cov.diag(i) > 0.0)) {
      throw DegenerateVarianceError(
          "covariance_summaries: zero variance at coordinate " + std::to_string(i), i);
    }
  }
  const double tr_sigma = cov.sigma.trace();
  const double fro_sigma_sq = cov.sigma.squaredNorm();
  const double fro_r = cov.correlation.norm();
  const double tr_dinv = cov.diag.cwiseInverse().sum();
  const double tr_r = static_cast<double>(p);

  CovSummaries out;
  out.cq_dim = tr_sigma * tr_sigma / fro_sigma_sq;
  const double u = (tr_sigma / static_cast<double>(p)) * (tr_dinv / fro_r);
  out.sd_unif = u * u;
  out.sd_tilt = tr_r * tr_r / (fro_r * fro_r);
  return out;
}

void save_covariance_csv(const RealizedCovariance& cov, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_covariance_csv: cannot open " + path);
  out << "p=" << cov.dim() << "\n";
  out.precision(17);
  for (Index i = 0; i < cov.dim(); ++i) {
    for (Index j = 0; j < cov.dim(); ++j) {
      if (j) out << ',';
      out << cov.sigma(i, j);
    }
    out << "\n";
  }
}

}  // namespace rpmt
