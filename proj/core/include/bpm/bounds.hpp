#pragma once

#include <cstdint>
#include <optional>

#include "bpm/orthant.hpp"

namespace bpm {

/// PAC-Bayes test-error bound for the Gibbs classifier on a version space
/// (training error zero): 1 - exp(-(kl + log(2n/delta)) / (n - 1)).
/// Monotone increasing in kl and in 1/delta; always in [0, 1].
[[nodiscard]] double gibbs_bound(double kl, int n, double delta);

/// BPM bound with centroidal labels: exactly e * gibbs_bound(A, n, delta),
/// using the exact complexity A in place of the intractable log(1/P_Y).
/// May exceed 1 (reported uncapped; see vacuous()).
[[nodiscard]] double bpm_bound_centroid(double A, int n, double delta);

/// BPM bound with centre-of-mass labels, evaluated at an MC estimate of
/// log(1/P_Y). `value` uses the point estimate; `conservative` shifts it by
/// +2 standard errors, since the estimate (unlike A) carries MC noise.
struct BpmComBound {
  double value = 0.0;
  double conservative = 0.0;
};
[[nodiscard]] BpmComBound bpm_bound_com(const OrthantEstimate& est, int n,
                                        double delta);

/// Rademacher baseline 4 * sqrt(Y'K^{-1}Y / n). The usual confidence term is
/// deliberately omitted (the comparison target omits it too); reports must
/// say so.
[[nodiscard]] double rademacher_bound(double rkhs_norm_sq_Y, std::int64_t n);

/// C-bound on the majority-vote error from the Gibbs error and the vote
/// agreement: 1 - (1 - 2*eps)^2 / alpha. Meaningful only for eps <= 1/2.
[[nodiscard]] double c_bound(double eps_gibbs, double alpha_gibbs);
[[nodiscard]] inline bool c_bound_applicable(double eps_gibbs) {
  return eps_gibbs <= 0.5;
}

/// BPM error bound via the C-bound plus the Bayes/BPM approximation gap.
[[nodiscard]] double optimistic_bpm_bound(double eps_gibbs, double alpha_gibbs,
                                          double delta_approx);

/// Bounds above 1 certify nothing; they are reported uncapped and flagged.
[[nodiscard]] inline bool vacuous(double bound) { return bound > 1.0; }

/// All bounds and complexity terms for one (kernel, dataset, n, delta)
/// configuration, as written to report rows.
struct BoundReport {
  int n = 0;
  double delta = 0.0;
  double kl_iso = 0.0;  // A(k, X, Y)
  std::optional<OrthantEstimate> log_inv_py;
  double gibbs_bound = 0.0;
  double bpm_bound_centroid = 0.0;
  std::optional<BpmComBound> bpm_bound_com;
  double rademacher_bound = 0.0;
  std::optional<double> c_bound;
  double jitter_used = 0.0;
  std::uint64_t seed = 0;
};

}  // namespace bpm
