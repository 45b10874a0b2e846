#pragma once

#include "rpmt/rng.hpp"
#include "rpmt/types.hpp"

namespace rpmt {

// rows x cols matrix of iid N(0,1) entries, filled in column-major order.
Matrix gaussian_matrix(Index rows, Index cols, RngStream& rng);

// count x p matrix whose rows are mean + S z with z iid standard normal.
Matrix sample_mvn(const Vector& mean, const Matrix& sqrt_factor, Index count, RngStream& rng);

// Thin-QR Q factor with the positive-diagonal-R convention, which makes Q
// the unique orthonormal factor of a full-rank input.
Matrix thin_qr_q(const Matrix& m);

// Haar-distributed p x k frame with orthonormal columns (Q factor of a
// Gaussian matrix).
Matrix haar_frame(Index p, Index k, RngStream& rng);

// Gaussian projection G (p x k); the orthonormal factor is materialized
// lazily since the test statistic never needs it.
class ProjectionDraw {
 public:
  ProjectionDraw(Index p, Index k, RngStream& rng);

  const Matrix& gaussian() const { return g_; }
  const Matrix& orthonormal() const;

 private:
  Matrix g_;
  mutable Matrix q_;
};

ProjectionDraw gaussian_projection(Index p, Index k, RngStream& rng);

// Z'Z with Z an n x k standard normal matrix: white Wishart W_k(n, I).
Matrix sample_white_wishart(Index k, Index n, RngStream& rng);

}  // namespace rpmt
