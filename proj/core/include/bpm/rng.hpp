#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bpm {

/// Deterministic random stream. Wraps mt19937_64 but generates uniforms,
/// normals and bounded integers itself so that streams are bit-identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Seed this stream was constructed with. Reproducing draws from it
  /// assumes the stream is fresh (no draws consumed before handoff).
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller (stateless, two uniforms per draw).
  double normal();

  /// Uniform integer in [0, n). Lemire multiply-shift with rejection.
  std::uint64_t bounded(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a master seed and a stream index
/// (splitmix64-style finalizer over master xor golden-ratio-weighted index).
[[nodiscard]] std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

/// Fisher-Yates permutation of {0, ..., n-1}.
[[nodiscard]] std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng);

}  // namespace bpm
