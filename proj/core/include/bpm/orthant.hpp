#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "bpm/gram.hpp"
#include "bpm/rng.hpp"

namespace bpm {

enum class OrthantMethod { naive_mc, ghk };

/// Monte-Carlo estimate of log(1/P_Y), the negative log orthant mass of
/// N(0, K) on {sign(u) = Y}. Carried in log domain throughout: P_Y itself
/// underflows for n beyond ~40.
struct OrthantEstimate {
  double log_inv_py = 0.0;
  double std_error = 0.0;  // batch-means (10 batches), on the log scale
  OrthantMethod method = OrthantMethod::naive_mc;
  std::int64_t draws = 0;
  std::int64_t hits = 0;  // naive_mc only
  /// False when naive MC saw zero hits; log_inv_py is then a +inf sentinel
  /// and only usable as "the mass is below resolution".
  bool ok = true;
};

/// Fraction of N(0, K) draws landing in the orthant; delta-method standard
/// error for the log.
[[nodiscard]] OrthantEstimate orthant_naive_mc(const GramFactorization& f,
                                               const Eigen::VectorXd& Y,
                                               std::int64_t draws, Rng& rng);

/// Sequential-conditioning importance sampler: walks the triangular factor,
/// draws each coordinate from its one-sided truncated conditional, and
/// accumulates the product of conditional orthant masses per path. Unbiased
/// for P_Y; exact (zero variance) when K is diagonal. Coordinates are
/// visited in natural order.
[[nodiscard]] OrthantEstimate orthant_ghk(const GramFactorization& f,
                                          const Eigen::VectorXd& Y,
                                          std::int64_t draws, Rng& rng);

/// Exact complexity measure
///   A(k, X, Y) = n(log 2 - 1/2)
///              + |K|^{1/n} * [(1/2 - 1/pi) tr K^{-1} + (1/pi) Y^T K^{-1} Y].
/// Upper-bounds log(1/P_Y); collapses to n log 2 at K = I.
[[nodiscard]] double complexity_A(const GramFactorization& f,
                                  const Eigen::VectorXd& Y);

/// Monte-Carlo mean with a batch-means standard error.
struct KlEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t draws = 0;
};

/// Direct Monte-Carlo estimate of the KL divergence between the truncated
/// isotropic posterior and the GP prior, by averaging the closed-form
/// log-density ratio over iso-posterior draws. Verification oracle for
/// complexity_A: the two agree in expectation.
[[nodiscard]] KlEstimate kl_iso_mc_check(const GramFactorization& f,
                                         const Eigen::VectorXd& Y,
                                         std::int64_t draws, Rng& rng);

}  // namespace bpm
