#include "bpm/orthant.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bpm/normal.hpp"
#include "bpm/sampler.hpp"

namespace bpm {

namespace {

constexpr int kBatches = 10;

/// Splits `draws` into up to kBatches contiguous batches (sizes differ by at
/// most one). Returns batch sizes.
std::vector<std::int64_t> batch_sizes(std::int64_t draws) {
  const auto b = static_cast<std::int64_t>(
      std::min<std::int64_t>(kBatches, draws));
  std::vector<std::int64_t> sizes(b, draws / b);
  for (std::int64_t i = 0; i < draws % b; ++i) sizes[i] += 1;
  return sizes;
}

double sample_sd(const std::vector<double>& xs) {
  const auto b = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= b;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (b - 1.0));
}

void check_draws(std::int64_t draws) {
  if (draws < 1) throw std::invalid_argument("orthant: draws must be >= 1");
}

}  // namespace

OrthantEstimate orthant_naive_mc(const GramFactorization& f,
                                 const Eigen::VectorXd& Y, std::int64_t draws,
                                 Rng& rng) {
  validate_sign_vector(Y);
  check_draws(draws);
  const Eigen::Index n = f.size();
  if (Y.size() != n) {
    throw std::invalid_argument("orthant_naive_mc: Y length mismatch");
  }
  const Eigen::MatrixXd L = f.factor();

  const auto sizes = batch_sizes(draws);
  std::vector<double> batch_frac;
  batch_frac.reserve(sizes.size());
  std::int64_t total_hits = 0;
  Eigen::VectorXd z(n);
  for (const std::int64_t size : sizes) {
    std::int64_t hits = 0;
    for (std::int64_t d = 0; d < size; ++d) {
      for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
      const Eigen::VectorXd u = L * z;
      bool inside = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!(u(i) * Y(i) > 0.0)) {
          inside = false;
          break;
        }
      }
      if (inside) ++hits;
    }
    total_hits += hits;
    batch_frac.push_back(static_cast<double>(hits) /
                         static_cast<double>(size));
  }

  OrthantEstimate est;
  est.method = OrthantMethod::naive_mc;
  est.draws = draws;
  est.hits = total_hits;
  if (total_hits == 0) {
    est.ok = false;
    est.log_inv_py = std::numeric_limits<double>::infinity();
    est.std_error = 0.0;
    return est;
  }
  const double p = static_cast<double>(total_hits) /
                   static_cast<double>(draws);
  est.log_inv_py = -std::log(p);
  // var(log p) ~ var(p)/p^2 (delta method).
  est.std_error =
      sample_sd(batch_frac) / std::sqrt(static_cast<double>(sizes.size())) / p;
  return est;
}

OrthantEstimate orthant_ghk(const GramFactorization& f,
                            const Eigen::VectorXd& Y, std::int64_t draws,
                            Rng& rng) {
  validate_sign_vector(Y);
  check_draws(draws);
  const Eigen::Index n = f.size();
  if (Y.size() != n) {
    throw std::invalid_argument("orthant_ghk: Y length mismatch");
  }
  const Eigen::MatrixXd L = f.factor();

  // Per-path log importance weight: sum_i log Phi(Y_i c_i / L_ii), where
  // c_i is the contribution of already-drawn coordinates and z_i is drawn
  // from the one-sided conditional that keeps the path inside the orthant.
  std::vector<double> log_w(static_cast<std::size_t>(draws));
  Eigen::VectorXd z(n);
  for (std::int64_t d = 0; d < draws; ++d) {
    double lw = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = (i == 0) ? 0.0 : L.row(i).head(i).dot(z.head(i));
      const double a = -c / L(i, i);  // orthant boundary in z_i
      if (Y(i) > 0.0) {
        lw += norm_logcdf(-a);
        z(i) = truncated_std_normal_lower(a, rng);
      } else {
        lw += norm_logcdf(a);
        z(i) = -truncated_std_normal_lower(-a, rng);
      }
    }
    log_w[static_cast<std::size_t>(d)] = lw;
  }

  // log-mean-exp overall and per batch, then batch-means SE of log(P).
  const auto sizes = batch_sizes(draws);
  double lse_all = -std::numeric_limits<double>::infinity();
  double max_all = -std::numeric_limits<double>::infinity();
  for (double lw : log_w) max_all = std::max(max_all, lw);
  double acc = 0.0;
  for (double lw : log_w) acc += std::exp(lw - max_all);
  lse_all = max_all + std::log(acc);
  const double log_mean = lse_all - std::log(static_cast<double>(draws));

  std::vector<double> ratio;  // batch mean / overall mean
  ratio.reserve(sizes.size());
  std::size_t pos = 0;
  for (const std::int64_t size : sizes) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < size; ++k) m = std::max(m, log_w[pos + k]);
    double s = 0.0;
    for (std::int64_t k = 0; k < size; ++k) s += std::exp(log_w[pos + k] - m);
    const double batch_log_mean =
        m + std::log(s) - std::log(static_cast<double>(size));
    ratio.push_back(std::exp(batch_log_mean - log_mean));
    pos += static_cast<std::size_t>(size);
  }

  OrthantEstimate est;
  est.method = OrthantMethod::ghk;
  est.draws = draws;
  est.log_inv_py = -log_mean;
  est.std_error =
      sample_sd(ratio) / std::sqrt(static_cast<double>(sizes.size()));
  return est;
}

double complexity_A(const GramFactorization& f, const Eigen::VectorXd& Y) {
  validate_sign_vector(Y);
  const auto n = static_cast<double>(f.size());
  if (Y.size() != f.size()) {
    throw std::invalid_argument("complexity_A: Y length mismatch");
  }
  constexpr double inv_pi = 1.0 / std::numbers::pi;
  return n * (std::numbers::ln2 - 0.5) +
         f.det_root() * ((0.5 - inv_pi) * f.trace_inverse() +
                         inv_pi * f.rkhs_norm_sq(Y));
}

KlEstimate kl_iso_mc_check(const GramFactorization& f,
                           const Eigen::VectorXd& Y, std::int64_t draws,
                           Rng& rng) {
  validate_sign_vector(Y);
  check_draws(draws);
  const Eigen::Index n = f.size();
  if (Y.size() != n) {
    throw std::invalid_argument("kl_iso_mc_check: Y length mismatch");
  }
  const double s = f.det_root();
  const double sd = std::sqrt(s);
  const double n_log2 = static_cast<double>(n) * std::numbers::ln2;

  // log(q_iso / p_gp)(Y) = n log 2 - Y'Y/(2s) + Y'K^{-1}Y/2; the
  // log-determinant terms of the two Gaussians cancel because the iso
  // variance is |K|^{1/n}.
  const auto sizes = batch_sizes(draws);
  std::vector<double> batch_mean;
  batch_mean.reserve(sizes.size());
  Eigen::VectorXd u(n);
  for (const std::int64_t size : sizes) {
    double acc = 0.0;
    for (std::int64_t d = 0; d < size; ++d) {
      for (Eigen::Index i = 0; i < n; ++i) {
        u(i) = Y(i) * std::abs(sd * rng.normal());
      }
      const double ratio =
          n_log2 - u.squaredNorm() / (2.0 * s) + 0.5 * f.rkhs_norm_sq(u);
      acc += ratio;
    }
    batch_mean.push_back(acc / static_cast<double>(size));
  }

  double total = 0.0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    total += batch_mean[b] * static_cast<double>(sizes[b]);
  }
  KlEstimate est;
  est.draws = draws;
  est.value = total / static_cast<double>(draws);
  est.std_error =
      sample_sd(batch_mean) / std::sqrt(static_cast<double>(sizes.size()));
  return est;
}

}  // namespace bpm
