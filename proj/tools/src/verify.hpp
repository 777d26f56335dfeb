#pragma once

#include <cstdint>

namespace bpm::cli {

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Test mode: appends a suite with a corrupted tolerance so the failure
  /// path (printing [FAIL], exit code 1) can itself be exercised.
  bool inject_failure = false;
};

/// Runs every invariant suite at reduced scale, printing one [PASS]/[FAIL]
/// line per suite. Returns the number of failed suites.
[[nodiscard]] int run_verify(const VerifyOptions& opt);

}  // namespace bpm::cli
