#pragma once

// Online GREEDY in the geometric view, extended to insertions and deletions.
//
// At row t GREEDY touches the stair of the input point: every lower point of
// an active pair whose rectangle with (x, t) holds no qualifying point,
// projected onto row t. A non-extreme insert or delete additionally touches
// the stair of its predecessor or successor, whichever union is smaller
// (predecessor side on ties).

#include <cstdint>
#include <memory>
#include <vector>

#include "geobst/model.hpp"

namespace geobst {

struct Stair {
  Point owner;
  /// Owner first, then the lower partners in increasing column order.
  std::vector<Point> members;
};

/// Stair of the valid cell (x, t) against the points of p below row t and
/// any points p already holds in row t. Throws ModelError if (x, t) is not
/// valid.
Stair stair(const PointSet& p, Key x, Time t);

/// Incremental GREEDY over one sequence. Rows are produced strictly in order
/// and each depends only on the rows before it.
class GreedyRunner {
 public:
  explicit GreedyRunner(UpdateSequence sequence);
  ~GreedyRunner();
  GreedyRunner(GreedyRunner&&) noexcept;
  GreedyRunner& operator=(GreedyRunner&&) noexcept;

  const UpdateSequence& sequence() const;
  /// Next row to be produced (1-based); length() + 1 when finished.
  Time next_row() const;
  bool done() const;

  /// Computes and commits the next row; returns its touched keys ascending.
  std::vector<Key> step();

  /// Commits an externally supplied row instead of computing it. Used to
  /// replay a prefix before asking for a single step.
  void commit(std::span<const Key> keys);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Touched points of row t for the op at (op.key, t), given that p holds the
/// final rows 1..t-1 (and possibly nothing else above). Throws ModelError if
/// the cell is not valid and SequenceError if op differs from the sequence's
/// op at t.
std::vector<Point> greedy_step(const PointSet& p, Op op, Time t);

struct GreedyResult {
  PointSet points;
  std::int64_t cost = 0;
};

/// Runs GREEDY over the whole sequence; cost is the number of touched points.
GreedyResult greedy_execute(const UpdateSequence& s);

}  // namespace geobst
