#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bpm/gram.hpp"
#include "bpm/kernel.hpp"
#include "bpm/rng.hpp"
#include "bpm/sampler.hpp"

namespace bpm {

/// Empirical test errors of the three classifiers plus the quantities the
/// agreement bounds need. All rates live in [0, 1].
struct ClassifierEval {
  double eps_gibbs = 0.0;    // mean per-vote error across the ensemble
  double eps_bayes = 0.0;    // majority-vote error
  double eps_bpm = 0.0;      // mean-prediction error
  double delta_approx = 0.0; // fraction of points where Bayes != BPM
  double alpha_gibbs = 0.0;  // E_x[(mean vote)^2], the vote agreement
  int test_count = 0;
  int bayes_tie_count = 0;   // vote sums that hit exactly 0 (broken to +1)
};

/// sign with the fixed tie-break sign(0) = +1.
[[nodiscard]] inline int sign_pm(double v) { return v >= 0.0 ? 1 : -1; }

/// K^{-1} * labels; compute once per label vector, then prediction at a test
/// point is a dot product with the Gram vector.
[[nodiscard]] Eigen::VectorXd interpolation_coefficients(
    const GramFactorization& f, const Eigen::VectorXd& labels);

/// Minimum-RKHS-norm interpolant value kxX' * K^{-1} * labels. One-shot form;
/// loops over test points should hoist interpolation_coefficients instead.
[[nodiscard]] double interpolate(const GramFactorization& f,
                                 const Eigen::VectorXd& labels,
                                 const Eigen::VectorXd& kxX);

/// Posterior predictive variance k(x,x) - kxX' K^{-1} kxX, clamped to 0 from
/// below. Clamp events are counted (see predictive_variance_clamp_count).
[[nodiscard]] double predictive_variance(
    const KernelSpec& spec, const GramFactorization& f,
    const Eigen::Ref<const Eigen::MatrixXd>& X,
    const Eigen::Ref<const Eigen::VectorXd>& x);

/// Same, with k(x,x) and the Gram vector already in hand.
[[nodiscard]] double predictive_variance_given(const GramFactorization& f,
                                               double kxx,
                                               const Eigen::VectorXd& kxX);

/// Times predictive_variance hit the clamp since process start.
[[nodiscard]] std::int64_t predictive_variance_clamp_count();

/// Interpolation coefficients for every sample row: row r = K^{-1} * sample_r.
struct EnsembleCoefficients {
  Eigen::MatrixXd coeffs;  // m x n
};
[[nodiscard]] EnsembleCoefficients ensemble_coefficients(
    const GramFactorization& f, const PosteriorSamples& s);

/// One +-1 vote per ensemble member: sign(coeffs_r . kxX + noise_sd * eta_r)
/// with fresh eta_r ~ N(0,1) per member.
[[nodiscard]] std::vector<int> gibbs_votes(const EnsembleCoefficients& ec,
                                           const Eigen::VectorXd& kxX,
                                           double noise_sd, Rng& rng);

/// Ensemble votes at x: one draw from the posterior predictive per sample
/// row, noise included.
[[nodiscard]] std::vector<int> gibbs_predict(
    const PosteriorSamples& s, const GramFactorization& f,
    const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
    const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng);

/// Majority sign of a vote vector; ties (sum 0) break to +1 and are flagged.
[[nodiscard]] int majority_sign(const std::vector<int>& votes,
                                bool* tie = nullptr);

/// Majority vote over the ensemble at x.
[[nodiscard]] int bayes_predict(const PosteriorSamples& s,
                                const GramFactorization& f,
                                const KernelSpec& spec,
                                const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& x,
                                Rng& rng);

/// Sign of the interpolant through mean labels (centroidal Y or the
/// chain-estimated centre of mass). The predictive noise has mean zero, so
/// it drops out of the mean prediction.
[[nodiscard]] int bpm_predict(const GramFactorization& f,
                              const Eigen::VectorXd& mean_labels,
                              const Eigen::VectorXd& kxX);

/// Prediction with noise amplitude scaled by 1/(gamma/sigma^L):
/// sign(interpolant + eta * sqrt(var) / gamma_over_sigmaL). Large margins
/// recover bpm_predict; tiny margins approach a fair coin.
[[nodiscard]] int margin_scaled_predict(const GramFactorization& f,
                                        const Eigen::VectorXd& Y,
                                        const Eigen::VectorXd& kxX, double var,
                                        double gamma_over_sigmaL, Rng& rng);

/// Reduces aligned per-point truth, ensemble votes and BPM predictions to
/// rates. Compensated summation; the Bayes/BPM approximation inequality
/// eps_bpm <= eps_bayes + delta_approx is asserted on the counts.
[[nodiscard]] ClassifierEval evaluate(
    const std::vector<int>& truth, const std::vector<std::vector<int>>& votes,
    const std::vector<int>& bpm_predictions);

}  // namespace bpm
