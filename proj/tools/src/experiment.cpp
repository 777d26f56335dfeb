#include "experiment.hpp"

#include <cmath>

#include "bpm/classifier.hpp"
#include "bpm/kernel.hpp"
#include "bpm/orthant.hpp"
#include "bpm/parallel.hpp"
#include "bpm/sampler.hpp"

namespace bpm::cli {

namespace {

// Stream-index namespaces for split_seed: every consumer of randomness gets
// its own deterministic stream regardless of thread schedule.
constexpr std::uint64_t kStreamIso = 0x100000;
constexpr std::uint64_t kStreamGp = 0x200000;
constexpr std::uint64_t kStreamOrthant = 0x300000;
constexpr std::uint64_t kStreamPoints = 0x400000;

}  // namespace

Dataset build_dataset(const ExperimentConfig& c, int count) {
  if (c.dataset == "mnist_even_odd") {
    return load_mnist(c.mnist_images, c.mnist_labels, count, c.seed);
  }
  if (c.dataset == "synthetic_gaussians") {
    return synthetic_gaussians(count, c.synth_dim, c.synth_separation, c.seed);
  }
  return synthetic_xor(count, c.synth_dim, c.seed);
}

BoundReport bounds_row(const ExperimentConfig& c, const Dataset& train,
                       int n) {
  const Dataset sub = train.head(n);
  const KernelSpec spec = kernel_from_config(c, static_cast<int>(sub.dim()));
  const GramFactorization f = factorize(gram_matrix(spec, sub.X));

  BoundReport r;
  r.n = n;
  r.delta = c.delta;
  r.seed = c.seed;
  r.jitter_used = f.jitter_used();
  r.kl_iso = complexity_A(f, sub.Y);
  r.gibbs_bound = gibbs_bound(r.kl_iso, n, c.delta);
  r.bpm_bound_centroid = bpm_bound_centroid(r.kl_iso, n, c.delta);
  r.rademacher_bound = rademacher_bound(f.rkhs_norm_sq(sub.Y), n);
  if (n <= c.ycom_cap) {
    Rng rng(split_seed(c.seed, kStreamOrthant + static_cast<std::uint64_t>(n)));
    const OrthantEstimate est = orthant_ghk(f, sub.Y, c.orthant_draws, rng);
    r.log_inv_py = est;
    r.bpm_bound_com = bpm_bound_com(est, n, c.delta);
  }
  return r;
}

PosteriorSamples draw_iso_posterior(const ExperimentConfig& c,
                                    const GramFactorization& f,
                                    const Eigen::VectorXd& Y, int n) {
  Rng rng(split_seed(c.seed, kStreamIso + static_cast<std::uint64_t>(n)));
  return sample_iso_orthant(f.det_root(), Y, c.ensemble, rng);
}

PosteriorSamples draw_gp_posterior(const ExperimentConfig& c,
                                   const GramFactorization& f,
                                   const Eigen::VectorXd& Y, int n) {
  Rng rng(split_seed(c.seed, kStreamGp + static_cast<std::uint64_t>(n)));
  return sample_gp_orthant_gibbs(f, Y, c.ensemble, c.burn_in, c.thinning, rng);
}

PredictionRun run_predictions(const ExperimentConfig& c, const Dataset& train,
                              const Dataset& test, int n) {
  const Dataset sub = train.head(n);
  const auto t = static_cast<std::size_t>(test.count());
  const KernelSpec spec = kernel_from_config(c, static_cast<int>(sub.dim()));
  const GramFactorization f = factorize(gram_matrix(spec, sub.X));

  const PosteriorSamples iso = draw_iso_posterior(c, f, sub.Y, n);
  const EnsembleCoefficients ec = ensemble_coefficients(f, iso);
  const Eigen::VectorXd coeff_y = interpolation_coefficients(f, sub.Y);

  Eigen::VectorXd coeff_com;
  const bool with_com = n <= c.ycom_cap;
  if (with_com) {
    const PosteriorSamples gp = draw_gp_posterior(c, f, sub.Y, n);
    coeff_com = interpolation_coefficients(f, centre_of_mass_labels(gp));
  }

  const Eigen::MatrixXd k_cross = cross_gram_matrix(spec, test.X, sub.X);
  const Eigen::MatrixXd member_values =
      k_cross * ec.coeffs.transpose();               // t x m
  const Eigen::VectorXd interp_y = k_cross * coeff_y;  // t
  const Eigen::VectorXd interp_com =
      with_com ? Eigen::VectorXd(k_cross * coeff_com) : Eigen::VectorXd();

  PredictionRun run;
  run.jitter_used = f.jitter_used();
  run.truth.resize(t);
  run.votes.resize(t);
  run.bpm.resize(t);
  if (with_com) run.bpm_com = std::vector<int>(t);

  const std::uint64_t point_master =
      split_seed(c.seed, kStreamPoints + static_cast<std::uint64_t>(n));
  const int m = c.ensemble;

  parallel_for(t, [&](std::size_t j) {
    const auto ji = static_cast<Eigen::Index>(j);
    run.truth[j] = test.Y(ji) > 0.0 ? 1 : -1;
    const Eigen::VectorXd kxX = k_cross.row(ji).transpose();
    const double kxx = kernel_eval(spec, test.X.row(ji), test.X.row(ji));
    const double sd = std::sqrt(predictive_variance_given(f, kxx, kxX));

    Rng rng(split_seed(point_master, j));
    auto& votes = run.votes[j];
    votes.resize(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
      const double noise = sd > 0.0 ? sd * rng.normal() : 0.0;
      votes[static_cast<std::size_t>(r)] =
          sign_pm(member_values(ji, r) + noise);
    }
    run.bpm[j] = sign_pm(interp_y(ji));
    if (with_com) (*run.bpm_com)[j] = sign_pm(interp_com(ji));
  });
  return run;
}

EvalReport compare_row(const ExperimentConfig& c, const Dataset& train,
                       const Dataset& test, int n) {
  const PredictionRun run = run_predictions(c, train, test, n);

  EvalReport r;
  r.n = n;
  r.delta = c.delta;
  r.ensemble = c.ensemble;
  r.seed = c.seed;
  r.jitter_used = run.jitter_used;
  r.eval = evaluate(run.truth, run.votes, run.bpm);
  if (run.bpm_com) {
    long long wrong = 0;
    for (std::size_t j = 0; j < run.truth.size(); ++j) {
      if ((*run.bpm_com)[j] != run.truth[j]) ++wrong;
    }
    r.err_bpm_com =
        static_cast<double>(wrong) / static_cast<double>(run.truth.size());
  }
  return r;
}

}  // namespace bpm::cli
