#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace bpm {

enum class DataSource { mnist_even_odd, synthetic_gaussians, synthetic_xor };

/// A labelled input set. Every row is normalised to ||x||^2 = d0 (verified
/// at construction), so unit-diagonal kernels see k(x, x) = 1.
struct Dataset {
  Eigen::MatrixXd X;  // n x d0
  Eigen::VectorXd Y;  // +-1 labels
  DataSource source = DataSource::synthetic_gaussians;
  std::uint64_t seed = 0;

  [[nodiscard]] Eigen::Index count() const { return X.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return X.cols(); }

  /// First n examples (loaders shuffle with the seed, so prefixes are
  /// unbiased subsamples and nested across n).
  [[nodiscard]] Dataset head(Eigen::Index n) const;
  /// Examples [begin, begin + n).
  [[nodiscard]] Dataset slice(Eigen::Index begin, Eigen::Index n) const;
};

/// Loads `count` examples from IDX image/label files (big-endian magic
/// 0x00000803 / 0x00000801), chosen by a seeded shuffle of the whole file.
/// Pixels are scaled to [0,1], flattened, and each row rescaled to
/// ||x||^2 = d0 (= 784 for MNIST). Digit labels map even -> +1, odd -> -1.
[[nodiscard]] Dataset load_mnist(const std::string& images_path,
                                 const std::string& labels_path, int count,
                                 std::uint64_t seed);

/// Two spherical Gaussian clusters at +-(separation/2) e1, labelled by
/// cluster, rows renormalised to ||x||^2 = d0.
[[nodiscard]] Dataset synthetic_gaussians(int n, int d0, double separation,
                                          std::uint64_t seed);

/// Standard-normal inputs labelled sign(x1 * x2): not linearly separable.
/// Requires d0 >= 2.
[[nodiscard]] Dataset synthetic_xor(int n, int d0, std::uint64_t seed);

/// Binary matrix container: magic "BPMMAT01", u64 LE rows, u64 LE cols,
/// row-major binary64 LE payload. Roundtrip is bit-exact.
void save_matrix(const std::string& path, const Eigen::MatrixXd& M);
[[nodiscard]] Eigen::MatrixXd load_matrix(const std::string& path);

}  // namespace bpm
