#include "bpm/data.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "bpm/rng.hpp"
#include "bpm/sampler.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix container I/O assumes a little-endian host");

namespace bpm {

namespace {

constexpr double kNormRelTol = 1e-9;
constexpr char kMatrixMagic[8] = {'B', 'P', 'M', 'M', 'A', 'T', '0', '1'};

/// Rescales every row to ||x||^2 = d0 and asserts the invariant stuck.
void normalise_rows(Eigen::MatrixXd& X) {
  const auto d0 = static_cast<double>(X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double norm = X.row(i).norm();
    if (!(norm > 0.0)) {
      throw std::runtime_error("dataset: row " + std::to_string(i) +
                               " has zero norm, cannot normalise");
    }
    X.row(i) *= std::sqrt(d0) / norm;
    if (std::abs(X.row(i).squaredNorm() - d0) > kNormRelTol * d0) {
      throw std::logic_error("dataset: normalisation failed on row " +
                             std::to_string(i));
    }
  }
}

std::uint32_t read_be32(std::istream& in, const char* what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw std::runtime_error(std::string("idx: truncated file reading ") +
                             what);
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

}  // namespace

Dataset Dataset::head(Eigen::Index n) const { return slice(0, n); }

Dataset Dataset::slice(Eigen::Index begin, Eigen::Index n) const {
  if (begin < 0 || n < 1 || begin + n > count()) {
    throw std::out_of_range("Dataset::slice: range outside dataset");
  }
  Dataset d;
  d.X = X.middleRows(begin, n);
  d.Y = Y.segment(begin, n);
  d.source = source;
  d.seed = seed;
  return d;
}

Dataset load_mnist(const std::string& images_path,
                   const std::string& labels_path, int count,
                   std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("load_mnist: count must be >= 1");

  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("load_mnist: cannot open " + images_path);
  if (const auto magic = read_be32(img, "image magic"); magic != 0x00000803u) {
    throw std::runtime_error("load_mnist: bad image magic " +
                             std::to_string(magic));
  }
  const std::uint32_t available = read_be32(img, "image count");
  const std::uint32_t rows = read_be32(img, "image rows");
  const std::uint32_t cols = read_be32(img, "image cols");
  const std::size_t d0 = static_cast<std::size_t>(rows) * cols;

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("load_mnist: cannot open " + labels_path);
  if (const auto magic = read_be32(lab, "label magic"); magic != 0x00000801u) {
    throw std::runtime_error("load_mnist: bad label magic " +
                             std::to_string(magic));
  }
  const std::uint32_t label_count = read_be32(lab, "label count");
  if (label_count != available) {
    throw std::runtime_error("load_mnist: image/label counts differ");
  }
  if (static_cast<std::uint32_t>(count) > available) {
    throw std::runtime_error("load_mnist: requested " + std::to_string(count) +
                             " examples, file holds " +
                             std::to_string(available));
  }

  std::vector<unsigned char> pixels(static_cast<std::size_t>(available) * d0);
  if (!img.read(reinterpret_cast<char*>(pixels.data()),
                static_cast<std::streamsize>(pixels.size()))) {
    throw std::runtime_error("load_mnist: truncated image payload");
  }
  std::vector<unsigned char> labels(available);
  if (!lab.read(reinterpret_cast<char*>(labels.data()),
                static_cast<std::streamsize>(labels.size()))) {
    throw std::runtime_error("load_mnist: truncated label payload");
  }

  Rng rng(seed);
  const auto order = shuffled_indices(available, rng);

  Dataset d;
  d.source = DataSource::mnist_even_odd;
  d.seed = seed;
  d.X.resize(count, static_cast<Eigen::Index>(d0));
  d.Y.resize(count);
  for (int i = 0; i < count; ++i) {
    const std::size_t src = order[static_cast<std::size_t>(i)];
    const unsigned char* px = pixels.data() + src * d0;
    for (std::size_t j = 0; j < d0; ++j) {
      d.X(i, static_cast<Eigen::Index>(j)) =
          static_cast<double>(px[j]) / 255.0;
    }
    d.Y(i) = (labels[src] % 2 == 0) ? 1.0 : -1.0;
  }
  normalise_rows(d.X);
  return d;
}

Dataset synthetic_gaussians(int n, int d0, double separation,
                            std::uint64_t seed) {
  if (n < 1 || d0 < 1) {
    throw std::invalid_argument("synthetic_gaussians: n, d0 must be >= 1");
  }
  if (separation < 0.0) {
    throw std::invalid_argument("synthetic_gaussians: separation must be >= 0");
  }
  Rng rng(seed);
  Dataset d;
  d.source = DataSource::synthetic_gaussians;
  d.seed = seed;
  d.X.resize(n, d0);
  d.Y.resize(n);
  for (int i = 0; i < n; ++i) {
    const bool positive = rng.bounded(2) == 0;
    d.Y(i) = positive ? 1.0 : -1.0;
    for (int j = 0; j < d0; ++j) d.X(i, j) = rng.normal();
    d.X(i, 0) += (positive ? 0.5 : -0.5) * separation;
  }
  normalise_rows(d.X);
  return d;
}

Dataset synthetic_xor(int n, int d0, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("synthetic_xor: n must be >= 1");
  if (d0 < 2) throw std::invalid_argument("synthetic_xor: d0 must be >= 2");
  Rng rng(seed);
  Dataset d;
  d.source = DataSource::synthetic_xor;
  d.seed = seed;
  d.X.resize(n, d0);
  d.Y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d0; ++j) {
      double z = rng.normal();
      while (z == 0.0) z = rng.normal();
      d.X(i, j) = z;
    }
    d.Y(i) = (d.X(i, 0) * d.X(i, 1) > 0.0) ? 1.0 : -1.0;
  }
  normalise_rows(d.X);
  return d;
}

void save_matrix(const std::string& path, const Eigen::MatrixXd& M) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_matrix: cannot open " + path);
  out.write(kMatrixMagic, sizeof(kMatrixMagic));
  const std::uint64_t rows = static_cast<std::uint64_t>(M.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(M.cols());
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const double v = M(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
  }
  if (!out) throw std::runtime_error("save_matrix: write failed on " + path);
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_matrix: cannot open " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMatrixMagic, 8) != 0) {
    throw std::runtime_error("load_matrix: bad magic in " + path);
  }
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  if (!in.read(reinterpret_cast<char*>(&rows), 8) ||
      !in.read(reinterpret_cast<char*>(&cols), 8)) {
    throw std::runtime_error("load_matrix: truncated header in " + path);
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      double v = 0.0;
      if (!in.read(reinterpret_cast<char*>(&v), 8)) {
        throw std::runtime_error("load_matrix: truncated payload in " + path);
      }
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return M;
}

}  // namespace bpm
