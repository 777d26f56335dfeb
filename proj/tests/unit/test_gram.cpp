#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "bpm/gram.hpp"
#include "bpm/rng.hpp"

using bpm::GramFactorization;

namespace {

// Fixed PD matrix with dyadic entries (exact in binary64); all reference
// scalars below come from a 40-digit independent evaluation.
Eigen::MatrixXd frozen_k4() {
  Eigen::MatrixXd K(4, 4);
  K << 4, 1, 0.5, 0.25,
       1, 3, 0.75, 0.5,
       0.5, 0.75, 5, 1.25,
       0.25, 0.5, 1.25, 2;
  return K;
}

Eigen::MatrixXd random_pd(int n, std::uint64_t seed, double ridge) {
  bpm::Rng rng(seed);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
  }
  Eigen::MatrixXd K = A * A.transpose() / n;
  K += ridge * Eigen::MatrixXd::Identity(n, n);
  return K;
}

}  // namespace

TEST_CASE("gram: identity factorizes with no jitter") {
  const auto f = bpm::factorize(Eigen::MatrixXd::Identity(3, 3));
  CHECK(f.jitter_used() == 0.0);
  CHECK(f.logdet() == 0.0);
  CHECK(f.trace_inverse() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f.det_root() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.factor().isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));
  Eigen::VectorXd v(3);
  v << 1, -2, 3;
  CHECK(f.solve(v).isApprox(v, 1e-14));
}

TEST_CASE("gram: scalar matrices have closed-form functionals") {
  const auto f2 = bpm::factorize(2.0 * Eigen::MatrixXd::Identity(3, 3));
  Eigen::VectorXd v(3);
  v << 4, 2, -6;
  CHECK(f2.solve(v).isApprox(0.5 * v, 1e-14));
  CHECK(f2.logdet() == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-14));

  Eigen::MatrixXd D = Eigen::Vector3d(1, 2, 4).asDiagonal();
  const auto fd = bpm::factorize(D);
  CHECK(fd.trace_inverse() == doctest::Approx(1.75).epsilon(1e-14));

  const auto f4 = bpm::factorize(2.0 * Eigen::MatrixXd::Identity(4, 4));
  Eigen::VectorXd Y(4);
  Y << 1, -1, 1, -1;
  CHECK(f4.rkhs_norm_sq(Y) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gram: frozen 4x4 matrix matches the independent oracle") {
  const auto f = bpm::factorize(frozen_k4());
  CHECK(f.jitter_used() == 0.0);
  CHECK(f.logdet() == doctest::Approx(4.4684641165484579133).epsilon(1e-13));
  CHECK(f.trace_inverse() ==
        doctest::Approx(1.5011867974383089256).epsilon(1e-13));
  CHECK(f.det_root() == doctest::Approx(3.0560279864653078131).epsilon(1e-13));

  Eigen::VectorXd v(4);
  v << 1, -2, 0.5, 3;
  CHECK(f.rkhs_norm_sq(v) ==
        doctest::Approx(8.0238255183841640915).epsilon(1e-13));
  Eigen::VectorXd Y(4);
  Y << 1, -1, 1, 1;
  CHECK(f.rkhs_norm_sq(Y) ==
        doctest::Approx(1.551704061982175646).epsilon(1e-13));

  const Eigen::VectorXd x = f.solve(v);
  CHECK(x(0) == doctest::Approx(0.42921760938689596489).epsilon(1e-12));
  CHECK(x(1) == doctest::Approx(-1.0582650364996193291).epsilon(1e-12));
  CHECK(x(2) == doctest::Approx(-0.25115320883156433338).epsilon(1e-12));
  CHECK(x(3) == doctest::Approx(1.867884813471270545).epsilon(1e-12));
}

TEST_CASE("gram: singular matrix succeeds on a positive jitter rung") {
  // duplicated training point: rank-1 Gram, exact zero pivot at jitter 0
  Eigen::MatrixXd K(2, 2);
  K << 1.0, 1.0, 1.0, 1.0;
  const auto f = bpm::factorize(K);
  CHECK(f.jitter_used() > 0.0);
  CHECK(f.jitter_used() <= 1e-4);
  // factor reconstructs the jittered matrix
  const Eigen::MatrixXd L = f.factor();
  const Eigen::MatrixXd R =
      L * L.transpose() -
      (K + f.jitter_used() * Eigen::MatrixXd::Identity(2, 2));
  CHECK(R.norm() <= 1e-8 * K.norm());
}

TEST_CASE("gram: indefinite matrix exhausts the ladder") {
  Eigen::MatrixXd K = Eigen::Vector3d(1.0, 1.0, -0.1).asDiagonal();
  CHECK_THROWS_AS((void)bpm::factorize(K), std::runtime_error);
}

TEST_CASE("gram: asymmetric input is rejected") {
  Eigen::MatrixXd K(2, 2);
  K << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS((void)bpm::factorize(K), std::invalid_argument);
  CHECK_THROWS_AS((void)bpm::factorize(Eigen::MatrixXd::Ones(2, 3)),
                  std::invalid_argument);
}

TEST_CASE("gram: dimension mismatches are rejected") {
  const auto f = bpm::factorize(Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS((void)f.solve(Eigen::VectorXd::Ones(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)f.solve_many(Eigen::MatrixXd::Ones(4, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)f.rkhs_norm_sq(Eigen::VectorXd::Ones(2)),
                  std::invalid_argument);
}

TEST_CASE("gram: solve-multiply roundtrip on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 13);
    const Eigen::MatrixXd K = random_pd(n, seed, 1e-3);
    const auto f = bpm::factorize(K);
    bpm::Rng rng(seed + 1000);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    const Eigen::MatrixXd Kj =
        K + f.jitter_used() * Eigen::MatrixXd::Identity(n, n);
    CHECK((Kj * f.solve(v) - v).norm() <= 1e-8 * v.norm());
    CHECK(f.rkhs_norm_sq(v) > 0.0);
    // quadratic form agrees with the solve route
    CHECK(f.rkhs_norm_sq(v) ==
          doctest::Approx(v.dot(f.solve(v))).epsilon(1e-9));
  }
}

TEST_CASE("gram: logdet additivity under scaling") {
  const Eigen::MatrixXd K = random_pd(6, 99, 0.5);
  const auto f = bpm::factorize(K);
  for (double c : {0.5, 2.0, 10.0}) {
    const auto fc = bpm::factorize(c * K);
    CHECK(fc.logdet() ==
          doctest::Approx(6.0 * std::log(c) + f.logdet()).epsilon(1e-12));
  }
}

TEST_CASE("gram: solve_many equals columnwise solve") {
  const Eigen::MatrixXd K = random_pd(5, 3, 0.5);
  const auto f = bpm::factorize(K);
  Eigen::MatrixXd rhs(5, 3);
  bpm::Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) rhs(i, j) = rng.normal();
  }
  const Eigen::MatrixXd X = f.solve_many(rhs);
  for (int j = 0; j < 3; ++j) {
    CHECK(X.col(j).isApprox(f.solve(rhs.col(j)), 1e-13));
  }
}
