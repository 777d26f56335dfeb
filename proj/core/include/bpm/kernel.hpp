#pragma once

#include <Eigen/Dense>

namespace bpm {

enum class KernelKind { arccosine, linear, rbf };

/// Positive-definite kernel description. `input_dim` is the ambient input
/// dimension d0; arccosine inputs must be normalised to ||x||^2 = d0 so that
/// k(x, x) = 1.
struct KernelSpec {
  KernelKind kind = KernelKind::arccosine;
  int depth = 7;             // arccosine only; number of layers, >= 2
  double lengthscale = 1.0;  // rbf only; > 0
  int input_dim = 0;

  [[nodiscard]] static KernelSpec arccosine(int depth, int input_dim);
  [[nodiscard]] static KernelSpec linear(int input_dim);
  [[nodiscard]] static KernelSpec rbf(double lengthscale, int input_dim);
};

/// One layer of the compositional arccosine map on cosine similarities:
///   h(t) = (1/pi) * (sqrt(1 - t^2) + t * (pi - arccos(t)))
/// Monotone on [-1, 1] with h(-1) = 0, h(0) = 1/pi, h(1) = 1. Inputs with
/// |t| <= 1 + 1e-9 are clamped to [-1, 1]; anything further out throws.
[[nodiscard]] double arccos_h(double t);

/// k(x, x').
[[nodiscard]] double kernel_eval(const KernelSpec& spec,
                                 const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const Eigen::Ref<const Eigen::VectorXd>& xp);

/// Gram matrix of the rows of X (n x d0). Symmetric by construction.
[[nodiscard]] Eigen::MatrixXd gram_matrix(
    const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X);

/// Vector [k(x, x_1), ..., k(x, x_n)] against the rows of X.
[[nodiscard]] Eigen::VectorXd gram_vector(
    const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
    const Eigen::Ref<const Eigen::VectorXd>& x);

/// Rectangular kernel block: entry (i, j) = k(a_i, b_j) for rows a_i of A
/// and b_j of B. Row i equals gram_vector(spec, B, a_i).
[[nodiscard]] Eigen::MatrixXd cross_gram_matrix(
    const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::MatrixXd>& B);

}  // namespace bpm
