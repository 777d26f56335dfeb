#include "bpm/sampler.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bpm/normal.hpp"

namespace bpm {

double truncated_std_normal_lower(double a, Rng& rng) {
  if (a <= 0.5) {
    // upper-tail mass of the draw = v * Phi(-a), v ~ U(0,1]; Phi(-a) >= 0.3
    // here so the quantile argument stays far from 0 and 1.
    const double tail = norm_cdf(-a);
    const double v = rng.uniform_pos();
    return -norm_quantile(v * tail);
  }
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a - std::log(rng.uniform_pos()) / lambda;
    const double rho = std::exp(-0.5 * (z - lambda) * (z - lambda));
    if (rng.uniform() <= rho) return z;
  }
}

namespace {

void check_chain_args(int m, int burn_in, int thinning) {
  if (m < 0) throw std::invalid_argument("sampler: m must be >= 0");
  if (burn_in < 0) throw std::invalid_argument("sampler: burn_in must be >= 0");
  if (thinning < 1) {
    throw std::invalid_argument("sampler: thinning must be >= 1");
  }
}

void check_in_orthant(const Eigen::VectorXd& row, const Eigen::VectorXd& Y) {
  for (Eigen::Index i = 0; i < Y.size(); ++i) {
    if (!(row(i) * Y(i) > 0.0)) {
      throw std::logic_error("sampler: emitted state left the orthant");
    }
  }
}

std::atomic<std::int64_t> g_iso_com_warnings{0};

}  // namespace

void validate_sign_vector(const Eigen::VectorXd& Y) {
  if (Y.size() < 1) {
    throw std::invalid_argument("label vector must be non-empty");
  }
  for (Eigen::Index i = 0; i < Y.size(); ++i) {
    if (Y(i) != 1.0 && Y(i) != -1.0) {
      throw std::invalid_argument("label vector entry " + std::to_string(i) +
                                  " is not +-1");
    }
  }
}

double truncated_normal_sample(double mean, double sd, int sign, Rng& rng) {
  if (!(sd > 0.0)) {
    throw std::invalid_argument("truncated_normal_sample: sd must be > 0");
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("truncated_normal_sample: sign must be +-1");
  }
  // Reduce to the positive-sign case: -x ~ N(-mean, sd^2).
  const double mu = (sign == 1) ? mean : -mean;
  for (;;) {
    const double z = truncated_std_normal_lower(-mu / sd, rng);
    const double x = mu + sd * z;
    if (x > 0.0) return sign * x;  // x == 0 after rounding: redraw
  }
}

PosteriorSamples sample_iso_orthant(double scale_sq, const Eigen::VectorXd& Y,
                                    int m, Rng& rng) {
  if (!(scale_sq > 0.0)) {
    throw std::invalid_argument("sample_iso_orthant: scale_sq must be > 0");
  }
  validate_sign_vector(Y);
  if (m < 1) throw std::invalid_argument("sample_iso_orthant: m must be >= 1");

  const double scale = std::sqrt(scale_sq);
  const Eigen::Index n = Y.size();
  PosteriorSamples out;
  out.kind = PosteriorKind::iso;
  out.Y = Y;
  out.meta = ChainMeta{0, 1, rng.seed()};
  out.samples.resize(m, n);
  for (int r = 0; r < m; ++r) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double z = scale * std::abs(rng.normal());
      while (z == 0.0) z = scale * std::abs(rng.normal());
      out.samples(r, i) = Y(i) * z;
    }
  }
  return out;
}

PosteriorSamples sample_gp_orthant_gibbs(const GramFactorization& f,
                                         const Eigen::VectorXd& Y, int m,
                                         int burn_in, int thinning, Rng& rng) {
  validate_sign_vector(Y);
  check_chain_args(m, burn_in, thinning);
  const Eigen::Index n = f.size();
  if (Y.size() != n) {
    throw std::invalid_argument("sample_gp_orthant_gibbs: Y length mismatch");
  }

  // Precision matrix once per chain; conditionals are then O(n) each.
  const Eigen::MatrixXd Lambda =
      f.solve_many(Eigen::MatrixXd::Identity(n, n));
  const Eigen::VectorXd cond_sd =
      Lambda.diagonal().cwiseInverse().cwiseSqrt();

  Eigen::VectorXd state = Y;
  Eigen::VectorXd g = Lambda * state;  // g = Lambda * state, kept in sync

  auto sweep = [&]() {
    g = Lambda * state;  // refresh once per sweep to stop drift accumulating
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mean = state(i) - g(i) / Lambda(i, i);
      const double old = state(i);
      state(i) = truncated_normal_sample(mean, cond_sd(i),
                                         Y(i) > 0.0 ? 1 : -1, rng);
      g += Lambda.col(i) * (state(i) - old);
    }
  };

  for (int s = 0; s < burn_in; ++s) sweep();

  PosteriorSamples out;
  out.kind = PosteriorKind::gp;
  out.Y = Y;
  out.meta = ChainMeta{burn_in, thinning, rng.seed()};
  out.samples.resize(m, n);
  for (int r = 0; r < m; ++r) {
    for (int t = 0; t < thinning; ++t) sweep();
    check_in_orthant(state, Y);
    out.samples.row(r) = state;
  }
  return out;
}

RejectionBudgetError::RejectionBudgetError(std::int64_t attempts_,
                                           double acceptance)
    : std::runtime_error(
          "rejection sampler: attempt budget exhausted after " +
          std::to_string(attempts_) + " attempts (acceptance so far " +
          std::to_string(acceptance) + ")"),
      attempts(attempts_),
      acceptance_estimate(acceptance) {}

RejectionSamples sample_gp_orthant_rejection(const Eigen::MatrixXd& K,
                                             const Eigen::VectorXd& Y, int m,
                                             std::int64_t max_attempts,
                                             Rng& rng) {
  validate_sign_vector(Y);
  if (m < 1) {
    throw std::invalid_argument("rejection sampler: m must be >= 1");
  }
  const GramFactorization f = factorize(K);
  const Eigen::MatrixXd L = f.factor();
  const Eigen::Index n = Y.size();

  RejectionSamples out;
  out.samples.kind = PosteriorKind::gp;
  out.samples.Y = Y;
  out.samples.meta = ChainMeta{0, 1, rng.seed()};
  out.samples.samples.resize(m, n);

  Eigen::VectorXd z(n);
  int accepted = 0;
  std::int64_t attempts = 0;
  while (accepted < m) {
    if (attempts >= max_attempts) {
      throw RejectionBudgetError(
          attempts, static_cast<double>(accepted) /
                        static_cast<double>(attempts));
    }
    ++attempts;
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
    const Eigen::VectorXd u = L * z;
    bool inside = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(u(i) * Y(i) > 0.0)) {
        inside = false;
        break;
      }
    }
    if (inside) out.samples.samples.row(accepted++) = u;
  }
  out.attempts = attempts;
  out.acceptance_rate =
      static_cast<double>(m) / static_cast<double>(attempts);
  return out;
}

Eigen::VectorXd centre_of_mass_labels(const PosteriorSamples& s) {
  if (s.count() == 0) {
    throw std::invalid_argument("centre_of_mass_labels: empty sample set");
  }
  if (s.kind == PosteriorKind::iso) {
    // Closed form exists for iso; an MC estimate here usually means the
    // caller picked the wrong posterior. Counted, not fatal.
    g_iso_com_warnings.fetch_add(1, std::memory_order_relaxed);
  }
  return s.samples.colwise().mean();
}

std::int64_t iso_centre_of_mass_warnings() {
  return g_iso_com_warnings.load(std::memory_order_relaxed);
}

}  // namespace bpm
