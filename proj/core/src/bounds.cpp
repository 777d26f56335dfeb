#include "bpm/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bpm {

double gibbs_bound(double kl, int n, double delta) {
  if (n < 2) throw std::invalid_argument("gibbs_bound: n must be >= 2");
  if (kl < 0.0) throw std::invalid_argument("gibbs_bound: kl must be >= 0");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("gibbs_bound: delta must lie in (0, 1]");
  }
  const double num = kl + std::log(2.0 * static_cast<double>(n) / delta);
  return 1.0 - std::exp(-num / (static_cast<double>(n) - 1.0));
}

double bpm_bound_centroid(double A, int n, double delta) {
  return std::numbers::e * gibbs_bound(A, n, delta);
}

BpmComBound bpm_bound_com(const OrthantEstimate& est, int n, double delta) {
  if (!est.ok || !std::isfinite(est.log_inv_py)) {
    throw std::invalid_argument(
        "bpm_bound_com: orthant estimate is a failure sentinel");
  }
  BpmComBound b;
  b.value = std::numbers::e * gibbs_bound(est.log_inv_py, n, delta);
  b.conservative = std::numbers::e *
                   gibbs_bound(est.log_inv_py + 2.0 * est.std_error, n, delta);
  return b;
}

double rademacher_bound(double rkhs_norm_sq_Y, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("rademacher_bound: n must be >= 1");
  if (rkhs_norm_sq_Y < 0.0) {
    throw std::invalid_argument("rademacher_bound: norm must be >= 0");
  }
  return 4.0 * std::sqrt(rkhs_norm_sq_Y / static_cast<double>(n));
}

double c_bound(double eps_gibbs, double alpha_gibbs) {
  if (!(alpha_gibbs > 0.0)) {
    throw std::invalid_argument("c_bound: alpha_gibbs must be > 0");
  }
  const double margin = 1.0 - 2.0 * eps_gibbs;
  return 1.0 - margin * margin / alpha_gibbs;
}

double optimistic_bpm_bound(double eps_gibbs, double alpha_gibbs,
                            double delta_approx) {
  return c_bound(eps_gibbs, alpha_gibbs) + delta_approx;
}

}  // namespace bpm
