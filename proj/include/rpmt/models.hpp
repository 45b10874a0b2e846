#pragma once

#include <string>
#include <variant>

#include "rpmt/rng.hpp"
#include "rpmt/types.hpp"

namespace rpmt {

enum class Decay { Slow, Fast };

// Eigenvalues in nonincreasing order, all strictly positive.
struct Spectrum {
  Vector values;

  Index dim() const { return values.size(); }
  double max() const { return values(0); }
  double min() const { return values(values.size() - 1); }
  double trace() const { return values.sum(); }
};

// p equally spaced base values on [0.01, 1], raised to power 6 (slow) or 15
// (fast), offset by 0.001, then rescaled so that sqrt(sum lambda_i^2) = 50.
Spectrum build_spectrum(Index p, Decay decay);

struct DiagonalDecay {
  Decay decay;
};
struct RandomOrthoDecay {
  Decay decay;
};
struct Block {
  Index blocks;      // m
  Index block_size;  // d, with m * d = p
  double rho;        // off-diagonal correlation, in (-1/(d-1), 1)
};
struct IdentityCov {};
struct ExplicitDense {
  Matrix sigma;
};
struct IdentityPlusLowRank {
  Matrix factor;  // V, p x r; Sigma = I + V V'
};

struct CovarianceModel {
  std::variant<DiagonalDecay, RandomOrthoDecay, Block, IdentityCov, ExplicitDense,
               IdentityPlusLowRank>
      kind;
  Index dim;
};

// Fresh Haar eigenvectors are drawn on every realization?
bool covariance_is_random(const CovarianceModel& model);

// A realized Sigma with a factor S (S S' = Sigma), its spectrum, diagonal
// D and correlation matrix R = D^{-1/2} Sigma D^{-1/2}.
struct RealizedCovariance {
  Matrix sigma;
  Matrix sqrt_factor;
  Spectrum spectrum;
  Vector diag;
  Matrix correlation;

  Index dim() const { return sigma.rows(); }
};

RealizedCovariance realize_covariance(const CovarianceModel& model, RngStream& rng);

enum class TiltRule {
  FixedNorm,    // delta = scale * S z / |S z|
  TraceScaled,  // delta ~ N(0, s Sigma) with s = sqrt(tr Sigma) / 2
};

struct Zero {};
struct UniformSphere {
  double scale = 1.0;
};
struct Tilted {
  TiltRule rule = TiltRule::FixedNorm;
  double scale = 2.0;  // used by FixedNorm
};
struct ExplicitVector {
  Vector v;
};

struct ShiftModel {
  std::variant<Zero, UniformSphere, Tilted, ExplicitVector> kind;
};

Vector sample_shift(const ShiftModel& model, const RealizedCovariance& cov, RngStream& rng);

// The three scalar summaries that drive the sufficient conditions of the
// power comparisons.
struct CovSummaries {
  double cq_dim;   // tr(Sigma)^2 / |Sigma|_F^2
  double sd_unif;  // (tr Sigma / p)^2 (tr D^{-1} / |R|_F)^2
  double sd_tilt;  // tr(R)^2 / |R|_F^2
};

CovSummaries covariance_summaries(const RealizedCovariance& cov);

// Dense row-major CSV with a "p=<dim>" header line.
void save_covariance_csv(const RealizedCovariance& cov, const std::string& path);

}  // namespace rpmt
