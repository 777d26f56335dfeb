#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "bpm/gram.hpp"
#include "bpm/rng.hpp"

namespace bpm {

enum class PosteriorKind { gp, iso };

/// How a chain was produced. `seed` is the construction seed of the Rng the
/// sampling op received; replaying it assumes the op got a fresh stream.
struct ChainMeta {
  int burn_in = 0;
  int thinning = 1;
  std::uint64_t seed = 0;
};

/// A batch of m label vectors drawn from an orthant-truncated posterior.
/// Every row satisfies sign(samples(r, i)) == Y(i) strictly (no zeros).
struct PosteriorSamples {
  Eigen::MatrixXd samples;  // m x n
  PosteriorKind kind = PosteriorKind::iso;
  Eigen::VectorXd Y;        // n-vector of +-1
  ChainMeta meta;

  [[nodiscard]] Eigen::Index count() const { return samples.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return samples.cols(); }
};

/// N(0,1) conditioned on z >= a. Inverse-cdf sampling for mild truncation;
/// Robert's exponential-proposal rejection once the cut is deeper than
/// ~0.5 sd (the quantile route loses precision there, naive resampling
/// hangs). Robust up to a ~ 37.
[[nodiscard]] double truncated_std_normal_lower(double a, Rng& rng);

/// Draw from N(mean, sd^2) conditioned on sign(draw) == sign. Strict: the
/// output is never 0. Robust deep into the tail (|mean|/sd up to ~37).
[[nodiscard]] double truncated_normal_sample(double mean, double sd, int sign,
                                             Rng& rng);

/// Exact iid draws from N(0, scale_sq*I) conditioned on the orthant
/// sign(Y): coordinate i is Y_i * |z_i|, z_i ~ N(0, scale_sq).
[[nodiscard]] PosteriorSamples sample_iso_orthant(double scale_sq,
                                                  const Eigen::VectorXd& Y,
                                                  int m, Rng& rng);

/// Coordinate-wise Gibbs sampler for N(0, K | sign = Y). Conditionals come
/// from the precision matrix (computed once from the factorization); the
/// chain starts at Y, runs burn_in full sweeps, then emits every thinning-th
/// state until m rows are collected.
[[nodiscard]] PosteriorSamples sample_gp_orthant_gibbs(
    const GramFactorization& f, const Eigen::VectorXd& Y, int m, int burn_in,
    int thinning, Rng& rng);

/// Thrown when the rejection sampler exhausts its attempt budget.
struct RejectionBudgetError : std::runtime_error {
  RejectionBudgetError(std::int64_t attempts, double acceptance);
  std::int64_t attempts;
  double acceptance_estimate;
};

/// Exact iid draws from N(0, K | sign = Y) by rejection from N(0, K).
/// Acceptance probability is the orthant mass P_Y (~2^-n), so this is a
/// small-n validation oracle only. Records the acceptance rate observed.
struct RejectionSamples {
  PosteriorSamples samples;
  std::int64_t attempts = 0;
  double acceptance_rate = 0.0;
};
[[nodiscard]] RejectionSamples sample_gp_orthant_rejection(
    const Eigen::MatrixXd& K, const Eigen::VectorXd& Y, int m,
    std::int64_t max_attempts, Rng& rng);

/// Column mean of the sample matrix: the Monte-Carlo estimate of the
/// centre-of-mass labels E[Y]. Intended for gp samples; for iso samples the
/// mean is closed-form (Y * sqrt(2*scale_sq/pi)), so a warning counter is
/// bumped and the empirical mean returned anyway.
[[nodiscard]] Eigen::VectorXd centre_of_mass_labels(const PosteriorSamples& s);

/// Times centre_of_mass_labels was called on iso samples (diagnostic).
[[nodiscard]] std::int64_t iso_centre_of_mass_warnings();

/// Throws unless every entry of Y is exactly +1 or -1.
void validate_sign_vector(const Eigen::VectorXd& Y);

}  // namespace bpm
