#pragma once

#include <optional>

#include "bpm/bounds.hpp"
#include "bpm/data.hpp"
#include "bpm/gram.hpp"
#include "bpm/report.hpp"
#include "bpm/sampler.hpp"
#include "config.hpp"

namespace bpm::cli {

/// Builds the configured dataset with `count` examples.
[[nodiscard]] Dataset build_dataset(const ExperimentConfig& c, int count);

/// One bounds row: Gram + factorization, complexity A, Gibbs/BPM/Rademacher
/// bounds, and (for n <= ycom_cap) the orthant estimate and the
/// centre-of-mass BPM bound. `train` must hold at least n examples.
[[nodiscard]] BoundReport bounds_row(const ExperimentConfig& c,
                                     const Dataset& train, int n);

/// One comparison row: iso-posterior ensemble of size c.ensemble, Gibbs
/// votes with predictive noise, Bayes majority votes, centroidal BPM, and
/// (for n <= ycom_cap) the centre-of-mass BPM test error.
[[nodiscard]] EvalReport compare_row(const ExperimentConfig& c,
                                     const Dataset& train, const Dataset& test,
                                     int n);

/// Per-test-point prediction bundle shared by compare_row and the
/// verification suites.
struct PredictionRun {
  std::vector<int> truth;
  std::vector<std::vector<int>> votes;  // ensemble votes per point
  std::vector<int> bpm;                 // centroidal BPM per point
  std::optional<std::vector<int>> bpm_com;
  double jitter_used = 0.0;
};
[[nodiscard]] PredictionRun run_predictions(const ExperimentConfig& c,
                                            const Dataset& train,
                                            const Dataset& test, int n);

/// The posterior draws exactly as run_predictions makes them, on the same
/// seed streams, so chains persisted by the sample command reproduce the
/// in-run chains bit for bit.
[[nodiscard]] PosteriorSamples draw_iso_posterior(const ExperimentConfig& c,
                                                  const GramFactorization& f,
                                                  const Eigen::VectorXd& Y,
                                                  int n);
[[nodiscard]] PosteriorSamples draw_gp_posterior(const ExperimentConfig& c,
                                                 const GramFactorization& f,
                                                 const Eigen::VectorXd& Y,
                                                 int n);

}  // namespace bpm::cli
