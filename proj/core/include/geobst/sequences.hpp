#pragma once

// Workload construction: deque sequences and their concentration, sequential
// access simulated by deletions, random permutations and mixed update
// sequences.

#include <cstdint>
#include <optional>
#include <vector>

#include "geobst/model.hpp"

namespace geobst {

enum class DequeSide : std::uint8_t { Min, Max };

struct DequeOp {
  DequeSide side = DequeSide::Max;
  OpKind kind = OpKind::Insert;

  friend bool operator==(const DequeOp&, const DequeOp&) = default;
};

struct DequeOptions {
  /// Probability of an insert when both an insert and a delete are possible.
  double insert_bias = 0.6;
  /// Probability of acting on the minimum side.
  double min_bias = 0.5;
  /// Fraction of the universe present in the initial tree.
  double initial_density = 0.5;
};

/// Random deque sequence of m ops over keys drawn from [1, n]; with
/// `restricted`, deletions happen only at the minimum. Keys that never
/// appear are dropped and the rest renumbered, so the result's universe may
/// be smaller than n.
UpdateSequence gen_deque(Key n, Time m, std::uint64_t seed, bool restricted, const DequeOptions& options = {});

/// Side of every op. A singleton delete counts as a minimum deletion and an
/// insert into an empty tree as a maximum insertion. Throws ShapeError on an
/// access or on an update away from both extremes.
std::vector<DequeOp> classify_deque(const UpdateSequence& s);
bool is_output_restricted(const UpdateSequence& s);

struct ConcentrationCheck {
  bool concentrated = true;
  std::optional<Time> first_violation;

  explicit operator bool() const { return concentrated; }
};

/// Checks every insert against the keys deleted so far as minima (L) and as
/// non-minima (R): a new minimum must exceed all of L, a new maximum must be
/// below all of R. Throws ShapeError for non-deque input.
ConcentrationCheck is_concentrated(const UpdateSequence& s);

/// Relabels every key lifetime with a fresh key so the result is
/// concentrated. Lifetimes ending in a minimum deletion come first in
/// deletion order, then lifetimes alive at the end, then those ending in a
/// maximum deletion in reverse deletion order. Relative order of live keys is
/// the same as in s at every step.
UpdateSequence concentrate(const UpdateSequence& s);

/// n minimum deletions from the initial tree [1, n].
UpdateSequence sequential_as_deletions(Key n);

/// Accesses of a uniform random permutation of [1, n] (Fisher-Yates).
UpdateSequence random_permutation_access(Key n, std::uint64_t seed);

struct MixOptions {
  double access = 0.5;
  double insert = 0.25;
  double remove = 0.25;
  double initial_density = 0.5;
};

/// Random mixed sequence over [1, n]. Keys the generator never touches stay
/// in the universe, so it is a relaxed sequence.
UpdateSequence random_update_sequence(Key n, Time m, std::uint64_t seed, const MixOptions& options = {});

/// Drops keys without operations and renumbers the rest in order.
UpdateSequence compress_universe(const UpdateSequence& s);

}  // namespace geobst
