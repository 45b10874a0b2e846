#include "rpmt/sampling.hpp"

#include <stdexcept>

namespace rpmt {

Matrix gaussian_matrix(Index rows, Index cols, RngStream& rng) {
  Matrix m(rows, cols);
  double* data = m.data();
  const Index total = rows * cols;
  for (Index i = 0; i < total; ++i) data[i] = rng.normal();
  return m;
}

Matrix sample_mvn(const Vector& mean, const Matrix& sqrt_factor, Index count, RngStream& rng) {
  if (count < 1) throw std::invalid_argument("sample_mvn: count must be >= 1");
  if (sqrt_factor.rows() != mean.size()) {
    throw std::invalid_argument("sample_mvn: mean and sqrt_factor dimensions differ");
  }
  Matrix z = gaussian_matrix(count, sqrt_factor.cols(), rng);
  Matrix x = z * sqrt_factor.transpose();
  x.rowwise() += mean.transpose();
  return x;
}

Matrix thin_qr_q(const Matrix& m) {
  const Index k = m.cols();
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), k);
  for (Index j = 0; j < k; ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix haar_frame(Index p, Index k, RngStream& rng) {
  if (k < 1 || k > p) throw std::invalid_argument("haar_frame: need 1 <= k <= p");
  return thin_qr_q(gaussian_matrix(p, k, rng));
}

ProjectionDraw::ProjectionDraw(Index p, Index k, RngStream& rng) {
  if (k < 1 || k > p) {
    throw std::invalid_argument("gaussian_projection: projection dimension must satisfy 1 <= k <= p");
  }
  g_ = gaussian_matrix(p, k, rng);
}

const Matrix& ProjectionDraw::orthonormal() const {
  if (q_.size() == 0) q_ = thin_qr_q(g_);
  return q_;
}

ProjectionDraw gaussian_projection(Index p, Index k, RngStream& rng) {
  return ProjectionDraw(p, k, rng);
}

Matrix sample_white_wishart(Index k, Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_white_wishart: need n >= 1");
  Matrix z = gaussian_matrix(n, k, rng);
  return z.transpose() * z;
}

}  // namespace rpmt
