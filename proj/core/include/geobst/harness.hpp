#pragma once

// Experiment driver behind the CLI and the acceptance suite. Every run is a
// deterministic function of its configuration and seed; failures carry the
// command line that replays them.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geobst/model.hpp"

namespace geobst {

struct ExperimentConfig {
  /// restricted-linear, general-quasilinear, lowerbound, roundtrip or
  /// sequential.
  std::string experiment;
  Key n = 0;
  Time m = 0;
  std::vector<std::uint64_t> seeds;
  bool restricted = false;
  /// Path prefix for <out>.csv and <out>.json; empty for none.
  std::string out;
  /// Relative tolerance for the growth and stability checks.
  double tolerance = 0.10;
  /// P5 containment is only searched on matrices with at most this many ones
  /// (the search keeps a staircase per segment-tree node). Skipped checks are
  /// counted in the report, never silently dropped. P4 is always checked.
  std::size_t p5_check_max_ones = 5000000;
};

struct RunRow {
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t cost = 0;
  double bound = 0;
  double ratio = 0;
  bool pass = true;
  /// Experiment-specific values, in the order of ExperimentReport::extra.
  std::vector<double> extra;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::string> extra;
  std::vector<RunRow> rows;
  /// One line per failed assertion, each ending in a replay command.
  std::vector<std::string> failures;
  /// Aggregate checks beyond the per-run rows (name, passed).
  std::vector<std::pair<std::string, bool>> checks;
  /// Counted separately so skipped work is visible in the aggregate.
  std::int64_t skipped_pattern_checks = 0;

  bool pass() const;
  double max_ratio() const;
  double mean_ratio() const;
  double mean_cost() const;
  std::string csv() const;
  std::string json() const;
  /// Writes <prefix>.csv and <prefix>.json.
  void write(const std::string& prefix) const;
};

/// Parses "7", "1,2,9" or "1-50" (inclusive).
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Deque sequence, its concentration, GREEDY on both (costs must match),
/// satisfiedness, pattern avoidance of the concentrated run (P4 when
/// restricted, P5 otherwise) and the cost bound: 24m + 12n for
/// restricted-linear, the ratio cost / (m 2^alpha(m, m+n) + n) otherwise.
ExperimentReport run_deque_bound(const ExperimentConfig& cfg);

/// Random permutation accesses under GREEDY, reinterpreted as inserts and
/// sorted through the offline converter.
ExperimentReport run_lowerbound(const ExperimentConfig& cfg);

/// Per seed: GREEDY output of a random mixed sequence and a random valid
/// execution, each pushed through both converters.
ExperimentReport run_roundtrip(const ExperimentConfig& cfg);

/// GREEDY on sequential_as_deletions(n) for each n in `sizes`; the ratio is
/// (cost + n) / n and must stay within the tolerance across sizes.
ExperimentReport run_sequential(const std::vector<Key>& sizes, double tolerance);

/// Dispatches on cfg.experiment.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace geobst
