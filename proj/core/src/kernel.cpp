#include "bpm/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bpm {

namespace {

constexpr double kClampTol = 1e-9;     // slack on |t| <= 1 before erroring
constexpr double kNormRelTol = 1e-8;   // slack on ||x||^2 == d0

void check_dim(const KernelSpec& spec, Eigen::Index got) {
  if (got != spec.input_dim) {
    throw std::invalid_argument("kernel: input has dimension " +
                                std::to_string(got) + ", spec expects " +
                                std::to_string(spec.input_dim));
  }
}

void check_normalised(const Eigen::Ref<const Eigen::VectorXd>& x, int d0) {
  const double n2 = x.squaredNorm();
  if (std::abs(n2 - d0) > kNormRelTol * d0) {
    throw std::invalid_argument(
        "arccosine kernel: input not normalised to ||x||^2 = d0 (got ||x||^2 "
        "= " +
        std::to_string(n2) + ", d0 = " + std::to_string(d0) + ")");
  }
}

double clamp_unit(double t) {
  if (t > 1.0) {
    if (t > 1.0 + kClampTol) {
      throw std::domain_error("arccos_h: cosine similarity " +
                              std::to_string(t) + " exceeds 1 beyond tolerance");
    }
    return 1.0;
  }
  if (t < -1.0) {
    if (t < -1.0 - kClampTol) {
      throw std::domain_error("arccos_h: cosine similarity " +
                              std::to_string(t) +
                              " is below -1 beyond tolerance");
    }
    return -1.0;
  }
  return t;
}

double compose_h(double t, int depth) {
  for (int layer = 1; layer < depth; ++layer) t = arccos_h(t);
  return t;
}

}  // namespace

KernelSpec KernelSpec::arccosine(int depth, int input_dim) {
  if (depth < 2) {
    throw std::invalid_argument("arccosine kernel: depth must be >= 2");
  }
  if (input_dim < 1) {
    throw std::invalid_argument("arccosine kernel: input_dim must be >= 1");
  }
  KernelSpec s;
  s.kind = KernelKind::arccosine;
  s.depth = depth;
  s.input_dim = input_dim;
  return s;
}

KernelSpec KernelSpec::linear(int input_dim) {
  if (input_dim < 1) {
    throw std::invalid_argument("linear kernel: input_dim must be >= 1");
  }
  KernelSpec s;
  s.kind = KernelKind::linear;
  s.input_dim = input_dim;
  return s;
}

KernelSpec KernelSpec::rbf(double lengthscale, int input_dim) {
  if (!(lengthscale > 0.0)) {
    throw std::invalid_argument("rbf kernel: lengthscale must be > 0");
  }
  if (input_dim < 1) {
    throw std::invalid_argument("rbf kernel: input_dim must be >= 1");
  }
  KernelSpec s;
  s.kind = KernelKind::rbf;
  s.lengthscale = lengthscale;
  s.input_dim = input_dim;
  return s;
}

double arccos_h(double t) {
  t = clamp_unit(t);
  // Endpoints are exact: h(1) = 1, h(-1) = 0.
  return (std::sqrt(1.0 - t * t) +
          t * (std::numbers::pi - std::acos(t))) /
         std::numbers::pi;
}

double kernel_eval(const KernelSpec& spec,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& xp) {
  check_dim(spec, x.size());
  check_dim(spec, xp.size());
  switch (spec.kind) {
    case KernelKind::linear:
      return x.dot(xp);
    case KernelKind::rbf: {
      const double d2 = (x - xp).squaredNorm();
      return std::exp(-d2 / (2.0 * spec.lengthscale * spec.lengthscale));
    }
    case KernelKind::arccosine: {
      check_normalised(x, spec.input_dim);
      check_normalised(xp, spec.input_dim);
      const double t = clamp_unit(x.dot(xp) / spec.input_dim);
      return compose_h(t, spec.depth);
    }
  }
  throw std::logic_error("kernel_eval: unknown kernel kind");
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec,
                            const Eigen::Ref<const Eigen::MatrixXd>& X) {
  check_dim(spec, X.cols());
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K;
  switch (spec.kind) {
    case KernelKind::linear:
      K = X * X.transpose();
      break;
    case KernelKind::rbf: {
      const Eigen::VectorXd sq = X.rowwise().squaredNorm();
      K = -2.0 * (X * X.transpose());
      K.colwise() += sq;
      K.rowwise() += sq.transpose();
      K = (-K.cwiseMax(0.0) / (2.0 * spec.lengthscale * spec.lengthscale))
              .array()
              .exp();
      break;
    }
    case KernelKind::arccosine: {
      for (Eigen::Index i = 0; i < n; ++i) {
        check_normalised(X.row(i), spec.input_dim);
      }
      K = (X * X.transpose()) / spec.input_dim;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          K(i, j) = compose_h(clamp_unit(K(i, j)), spec.depth);
        }
      }
      break;
    }
  }
  // Dot products are not exactly symmetric in floating point; the
  // factorisation downstream requires symmetry to machine precision.
  K = ((K + K.transpose()) / 2.0).eval();
  return K;
}

Eigen::MatrixXd cross_gram_matrix(const KernelSpec& spec,
                                  const Eigen::Ref<const Eigen::MatrixXd>& A,
                                  const Eigen::Ref<const Eigen::MatrixXd>& B) {
  check_dim(spec, A.cols());
  check_dim(spec, B.cols());
  Eigen::MatrixXd C;
  switch (spec.kind) {
    case KernelKind::linear:
      return A * B.transpose();
    case KernelKind::rbf: {
      const Eigen::VectorXd na = A.rowwise().squaredNorm();
      const Eigen::VectorXd nb = B.rowwise().squaredNorm();
      C = -2.0 * (A * B.transpose());
      C.colwise() += na;
      C.rowwise() += nb.transpose();
      return (-C.cwiseMax(0.0) / (2.0 * spec.lengthscale * spec.lengthscale))
          .array()
          .exp();
    }
    case KernelKind::arccosine: {
      for (Eigen::Index i = 0; i < A.rows(); ++i) {
        check_normalised(A.row(i), spec.input_dim);
      }
      for (Eigen::Index i = 0; i < B.rows(); ++i) {
        check_normalised(B.row(i), spec.input_dim);
      }
      C = (A * B.transpose()) / spec.input_dim;
      for (Eigen::Index j = 0; j < C.cols(); ++j) {
        for (Eigen::Index i = 0; i < C.rows(); ++i) {
          C(i, j) = compose_h(clamp_unit(C(i, j)), spec.depth);
        }
      }
      return C;
    }
  }
  throw std::logic_error("cross_gram_matrix: unknown kernel kind");
}

Eigen::VectorXd gram_vector(const KernelSpec& spec,
                            const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dim(spec, X.cols());
  check_dim(spec, x.size());
  Eigen::VectorXd v;
  switch (spec.kind) {
    case KernelKind::linear:
      return X * x;
    case KernelKind::rbf: {
      v = (X.rowwise() - x.transpose()).rowwise().squaredNorm();
      return (-v.cwiseMax(0.0) / (2.0 * spec.lengthscale * spec.lengthscale))
          .array()
          .exp();
    }
    case KernelKind::arccosine: {
      check_normalised(x, spec.input_dim);
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        check_normalised(X.row(i), spec.input_dim);
      }
      v = (X * x) / spec.input_dim;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = compose_h(clamp_unit(v(i)), spec.depth);
      }
      return v;
    }
  }
  throw std::logic_error("gram_vector: unknown kernel kind");
}

}  // namespace bpm
