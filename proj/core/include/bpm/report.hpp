#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpm/bounds.hpp"
#include "bpm/classifier.hpp"

namespace bpm {

/// Raised when a structured report record is missing a required key or holds
/// the wrong type.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One classifier-comparison row: evaluation results plus the context needed
/// to reproduce the row in isolation.
struct EvalReport {
  int n = 0;
  double delta = 0.0;
  int ensemble = 0;
  ClassifierEval eval;
  std::optional<double> err_bpm_com;  // centre-of-mass BPM, when computed
  double jitter_used = 0.0;
  std::uint64_t seed = 0;
};

/// Structured-text (JSON Lines) serialization: one self-describing record
/// per line, append-safe. parse_* throws SchemaError on missing keys.
[[nodiscard]] std::string to_record(const BoundReport& r);
[[nodiscard]] std::string to_record(const EvalReport& r);
[[nodiscard]] BoundReport parse_bound_report(const std::string& line);
[[nodiscard]] EvalReport parse_eval_report(const std::string& line);

void append_report(const std::string& path, const BoundReport& r);
void append_report(const std::string& path, const EvalReport& r);

/// Tabular export for plotting: exactly one header row, then one line per
/// report. Numeric cells render deterministically (byte-stable across
/// reruns); absent optionals are empty cells.
void write_bounds_csv(const std::string& path,
                      const std::vector<BoundReport>& rows);
void write_eval_csv(const std::string& path,
                    const std::vector<EvalReport>& rows);

/// Deterministic decimal rendering used by the CSV writers (17 significant
/// digits, enough to roundtrip any double).
[[nodiscard]] std::string format_double(double v);

}  // namespace bpm
