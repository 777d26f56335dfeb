// Microbenchmarks for the hot paths: Gram assembly, factorization, posterior
// sampling and orthant estimation. Sizes mirror the experiment defaults.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "bpm/gram.hpp"
#include "bpm/kernel.hpp"
#include "bpm/orthant.hpp"
#include "bpm/rng.hpp"
#include "bpm/sampler.hpp"

namespace {

using bpm::Rng;

Eigen::MatrixXd unit_rows(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) X(i, j) = rng.normal();
    X.row(i) *= std::sqrt(static_cast<double>(d)) / X.row(i).norm();
  }
  return X;
}

Eigen::VectorXd alternating_signs(int n) {
  Eigen::VectorXd Y(n);
  for (int i = 0; i < n; ++i) Y(i) = (i % 2 == 0) ? 1.0 : -1.0;
  return Y;
}

void bm_gram_arccosine(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = bpm::KernelSpec::arccosine(7, 16);
  const Eigen::MatrixXd X = unit_rows(n, 16, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bpm::gram_matrix(spec, X));
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_gram_arccosine)->Arg(100)->Arg(500)->Arg(1000)->Complexity();

void bm_factorize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = bpm::KernelSpec::arccosine(7, 16);
  const Eigen::MatrixXd K = bpm::gram_matrix(spec, unit_rows(n, 16, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bpm::factorize(K));
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_factorize)->Arg(100)->Arg(500)->Arg(1000)->Complexity();

void bm_truncated_normal(benchmark::State& state) {
  Rng rng(3);
  double acc = 0.0;
  for (auto _ : state) {
    acc += bpm::truncated_std_normal_lower(0.0, rng);
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(bm_truncated_normal);

void bm_iso_sampling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::VectorXd Y = alternating_signs(n);
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bpm::sample_iso_orthant(1.0, Y, 1000, rng));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bm_iso_sampling)->Arg(100)->Arg(1000);

void bm_gibbs_chain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = bpm::KernelSpec::arccosine(7, 16);
  const auto f = bpm::factorize(bpm::gram_matrix(spec, unit_rows(n, 16, 5)));
  const Eigen::VectorXd Y = alternating_signs(n);
  Rng rng(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bpm::sample_gp_orthant_gibbs(f, Y, 100, 10, 1, rng));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(bm_gibbs_chain)->Arg(50)->Arg(200);

void bm_orthant_ghk(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = bpm::KernelSpec::arccosine(7, 16);
  const auto f = bpm::factorize(bpm::gram_matrix(spec, unit_rows(n, 16, 7)));
  const Eigen::VectorXd Y = alternating_signs(n);
  Rng rng(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bpm::orthant_ghk(f, Y, 2000, rng));
  }
}
BENCHMARK(bm_orthant_ghk)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
