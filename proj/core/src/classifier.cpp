#include "bpm/classifier.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bpm/kernel.hpp"

namespace bpm {

namespace {

std::atomic<std::int64_t> g_variance_clamps{0};

/// Kahan compensated accumulator.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

Eigen::VectorXd interpolation_coefficients(const GramFactorization& f,
                                           const Eigen::VectorXd& labels) {
  return f.solve(labels);
}

double interpolate(const GramFactorization& f, const Eigen::VectorXd& labels,
                   const Eigen::VectorXd& kxX) {
  if (labels.size() != f.size() || kxX.size() != f.size()) {
    throw std::invalid_argument("interpolate: dimension mismatch");
  }
  return kxX.dot(f.solve(labels));
}

double predictive_variance_given(const GramFactorization& f, double kxx,
                                 const Eigen::VectorXd& kxX) {
  if (kxX.size() != f.size()) {
    throw std::invalid_argument("predictive_variance: dimension mismatch");
  }
  const double var = kxx - f.rkhs_norm_sq(kxX);
  if (var < 0.0) {
    g_variance_clamps.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return var;
}

double predictive_variance(const KernelSpec& spec, const GramFactorization& f,
                           const Eigen::Ref<const Eigen::MatrixXd>& X,
                           const Eigen::Ref<const Eigen::VectorXd>& x) {
  return predictive_variance_given(f, kernel_eval(spec, x, x),
                                   gram_vector(spec, X, x));
}

std::int64_t predictive_variance_clamp_count() {
  return g_variance_clamps.load(std::memory_order_relaxed);
}

EnsembleCoefficients ensemble_coefficients(const GramFactorization& f,
                                           const PosteriorSamples& s) {
  if (s.dim() != f.size()) {
    throw std::invalid_argument("ensemble_coefficients: dimension mismatch");
  }
  EnsembleCoefficients ec;
  ec.coeffs = f.solve_many(s.samples.transpose()).transpose();
  return ec;
}

std::vector<int> gibbs_votes(const EnsembleCoefficients& ec,
                             const Eigen::VectorXd& kxX, double noise_sd,
                             Rng& rng) {
  if (ec.coeffs.cols() != kxX.size()) {
    throw std::invalid_argument("gibbs_votes: dimension mismatch");
  }
  const Eigen::VectorXd values = ec.coeffs * kxX;
  std::vector<int> votes(static_cast<std::size_t>(values.size()));
  for (Eigen::Index r = 0; r < values.size(); ++r) {
    const double noise = noise_sd > 0.0 ? noise_sd * rng.normal() : 0.0;
    votes[static_cast<std::size_t>(r)] = sign_pm(values(r) + noise);
  }
  return votes;
}

std::vector<int> gibbs_predict(const PosteriorSamples& s,
                               const GramFactorization& f,
                               const KernelSpec& spec,
                               const Eigen::Ref<const Eigen::MatrixXd>& X,
                               const Eigen::Ref<const Eigen::VectorXd>& x,
                               Rng& rng) {
  const Eigen::VectorXd kxX = gram_vector(spec, X, x);
  const double var = predictive_variance_given(f, kernel_eval(spec, x, x), kxX);
  return gibbs_votes(ensemble_coefficients(f, s), kxX, std::sqrt(var), rng);
}

int majority_sign(const std::vector<int>& votes, bool* tie) {
  if (votes.empty()) {
    throw std::invalid_argument("majority_sign: no votes");
  }
  long long sum = 0;
  for (int v : votes) sum += v;
  if (tie != nullptr) *tie = (sum == 0);
  return sum >= 0 ? 1 : -1;
}

int bayes_predict(const PosteriorSamples& s, const GramFactorization& f,
                  const KernelSpec& spec,
                  const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) {
  return majority_sign(gibbs_predict(s, f, spec, X, x, rng));
}

int bpm_predict(const GramFactorization& f, const Eigen::VectorXd& mean_labels,
                const Eigen::VectorXd& kxX) {
  return sign_pm(interpolate(f, mean_labels, kxX));
}

int margin_scaled_predict(const GramFactorization& f, const Eigen::VectorXd& Y,
                          const Eigen::VectorXd& kxX, double var,
                          double gamma_over_sigmaL, Rng& rng) {
  if (var < 0.0) {
    throw std::invalid_argument("margin_scaled_predict: var must be >= 0");
  }
  if (!(gamma_over_sigmaL > 0.0)) {
    throw std::invalid_argument(
        "margin_scaled_predict: margin ratio must be > 0");
  }
  const double noise =
      var > 0.0 ? rng.normal() * std::sqrt(var) / gamma_over_sigmaL : 0.0;
  return sign_pm(interpolate(f, Y, kxX) + noise);
}

ClassifierEval evaluate(const std::vector<int>& truth,
                        const std::vector<std::vector<int>>& votes,
                        const std::vector<int>& bpm_predictions) {
  const std::size_t t = truth.size();
  if (votes.size() != t || bpm_predictions.size() != t || t == 0) {
    throw std::invalid_argument(
        "evaluate: prediction arrays empty or misaligned");
  }

  Kahan gibbs_err, alpha;
  long long bayes_wrong = 0;
  long long bpm_wrong = 0;
  long long disagree = 0;
  int ties = 0;

  for (std::size_t j = 0; j < t; ++j) {
    const auto& v = votes[j];
    if (v.empty()) {
      throw std::invalid_argument("evaluate: empty vote vector at point " +
                                  std::to_string(j));
    }
    long long sum = 0;
    for (int vote : v) sum += vote;
    const double mean_vote =
        static_cast<double>(sum) / static_cast<double>(v.size());
    gibbs_err.add(0.5 * (1.0 - truth[j] * mean_vote));
    alpha.add(mean_vote * mean_vote);
    if (sum == 0) ++ties;
    const int bayes = sum >= 0 ? 1 : -1;
    if (bayes != truth[j]) ++bayes_wrong;
    if (bpm_predictions[j] != truth[j]) ++bpm_wrong;
    if (bpm_predictions[j] != bayes) ++disagree;
  }

  ClassifierEval e;
  e.test_count = static_cast<int>(t);
  e.bayes_tie_count = ties;
  const auto tn = static_cast<double>(t);
  e.eps_gibbs = gibbs_err.sum / tn;
  e.alpha_gibbs = alpha.sum / tn;
  e.eps_bayes = static_cast<double>(bayes_wrong) / tn;
  e.eps_bpm = static_cast<double>(bpm_wrong) / tn;
  e.delta_approx = static_cast<double>(disagree) / tn;

  // Pointwise, |I[bpm wrong] - I[bayes wrong]| <= I[bpm != bayes]; if this
  // trips, the reduction above is broken.
  if (bpm_wrong > bayes_wrong + disagree) {
    throw std::logic_error("evaluate: eps_bpm > eps_bayes + delta_approx");
  }
  return e;
}

}  // namespace bpm
