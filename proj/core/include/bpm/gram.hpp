#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace bpm {

/// Cholesky factorization of a Gram matrix K, with automatic jitter
/// escalation: the smallest jitter from the ladder
///   0, 1e-12*dbar, 1e-10*dbar, ..., 1e-4*dbar   (dbar = mean diagonal)
/// for which K + jitter*I factorizes AND probe solves have relative
/// residual <= 1e-8 is recorded in jitter_used(). All derived quantities
/// (solves, logdet, trace of the inverse, RKHS norms) refer to K + jitter*I.
///
/// Immutable after construction; all queries are const and thread-safe.
class GramFactorization {
 public:
  /// Throws std::invalid_argument if K is not symmetric (1e-10 relative),
  /// std::runtime_error if no rung of the ladder yields a usable factor.
  [[nodiscard]] static GramFactorization factorize(const Eigen::MatrixXd& K);

  [[nodiscard]] Eigen::Index size() const { return K_.rows(); }
  [[nodiscard]] double jitter_used() const { return jitter_; }

  /// The original matrix K (without jitter).
  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return K_; }

  /// Lower-triangular L with L*L^T = K + jitter*I.
  [[nodiscard]] Eigen::MatrixXd factor() const { return llt_.matrixL(); }

  /// (K + jitter*I)^{-1} v.
  [[nodiscard]] Eigen::VectorXd solve(
      const Eigen::Ref<const Eigen::VectorXd>& v) const;

  /// Multi-right-hand-side solve, one column per rhs.
  [[nodiscard]] Eigen::MatrixXd solve_many(
      const Eigen::Ref<const Eigen::MatrixXd>& rhs) const;

  /// log|K + jitter*I| = 2 * sum(log(diag(L))).
  [[nodiscard]] double logdet() const { return logdet_; }

  /// |K + jitter*I|^{1/n}, the geometric mean eigenvalue.
  [[nodiscard]] double det_root() const;

  /// tr (K + jitter*I)^{-1}.
  [[nodiscard]] double trace_inverse() const { return trace_inv_; }

  /// v^T (K + jitter*I)^{-1} v, computed as ||L^{-1}v||^2 (hence >= 0).
  [[nodiscard]] double rkhs_norm_sq(
      const Eigen::Ref<const Eigen::VectorXd>& v) const;

 private:
  GramFactorization() = default;

  Eigen::MatrixXd K_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
  double logdet_ = 0.0;
  double trace_inv_ = 0.0;
};

/// Convenience free-function form.
[[nodiscard]] inline GramFactorization factorize(const Eigen::MatrixXd& K) {
  return GramFactorization::factorize(K);
}

}  // namespace bpm
