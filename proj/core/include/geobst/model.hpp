#pragma once

// Geometric grid model of BST executions with insertions and deletions.
//
// Columns are keys 1..n, rows are timesteps 1..m with later times drawn
// higher. An UpdateSequence places one access/insert/delete point per row;
// a PointSet adds the cells touched by an execution on top of those.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geobst/errors.hpp"

namespace geobst {

using Key = std::int32_t;
using Time = std::int32_t;

enum class OpKind : std::uint8_t { Access, Insert, Delete };

enum class PointKind : std::uint8_t { Access, Insert, Delete, Touched };

char to_char(OpKind kind);
char to_char(PointKind kind);
PointKind point_kind(OpKind kind);

struct Op {
  Key key = 0;
  OpKind kind = OpKind::Access;

  friend bool operator==(const Op&, const Op&) = default;
};

struct Cell {
  Key x = 0;
  Time t = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell& a, const Cell& b) {
    if (a.t != b.t) return a.t <=> b.t;
    return a.x <=> b.x;
  }
};

struct Point {
  Key x = 0;
  Time t = 0;
  PointKind kind = PointKind::Touched;

  Cell cell() const { return {x, t}; }
  bool is_update() const { return kind == PointKind::Insert || kind == PointKind::Delete; }
  bool in_input() const { return kind != PointKind::Touched; }

  friend bool operator==(const Point&, const Point&) = default;
};

std::string to_string(const Point& p);

/// Lifetime of a key: the rows during which the key may be touched, from its
/// insertion (or the start, for keys in the initial tree) up to and including
/// its deletion (or the horizon).
struct ActiveInterval {
  Time begin = 1;
  Time end = 1;
  bool from_start = false;
  bool to_horizon = false;

  bool contains(Time t) const { return begin <= t && t <= end; }
  friend bool operator==(const ActiveInterval&, const ActiveInterval&) = default;
};

namespace detail {
struct ColumnIndex;
}

/// Ordered (key, op) list over keys [1, universe]. Immutable; copies share
/// the per-column index.
class UpdateSequence {
 public:
  UpdateSequence();
  /// Throws SequenceError when an access/delete hits an absent key or an
  /// insert hits a present one (membership of the implicit initial tree is
  /// inferred from each key's first operation).
  UpdateSequence(Key universe, std::vector<Op> ops);

  Key universe() const;
  Time length() const;
  /// 1-based.
  const Op& op(Time t) const;
  std::span<const Op> ops() const;

  /// Key is in the implicit initial tree: its first update is a delete, or
  /// it is never updated at all.
  bool initially_present(Key x) const;
  /// Rows of the update (insert/delete) operations on column x, ascending.
  std::span<const Time> update_times(Key x) const;
  std::span<const ActiveInterval> lifetimes(Key x) const;
  /// Keys in [1, universe] with no operation. Relaxed inputs may have some;
  /// such keys sit untouched in the initial tree.
  std::vector<Key> untouched_keys() const;
  /// Throws SequenceError if some key never appears.
  void require_every_key_used() const;

  friend bool operator==(const UpdateSequence& a, const UpdateSequence& b);

 private:
  std::shared_ptr<const detail::ColumnIndex> index_;
};

/// Classified points on the [universe] x [horizon] grid. Always contains the
/// input points of its sequence; at most one point per cell.
class PointSet {
 public:
  PointSet();
  /// Builds P(S) plus the given touched cells. Cells that coincide with
  /// input points keep the input kind; duplicates are merged. Throws
  /// RangeError for out-of-grid cells.
  PointSet(UpdateSequence sequence, std::span<const Cell> touched);
  explicit PointSet(UpdateSequence sequence);

  const UpdateSequence& sequence() const { return sequence_; }
  Key universe() const { return sequence_.universe(); }
  Time horizon() const { return sequence_.length(); }
  std::size_t size() const { return points_.size(); }

  /// Sorted by (t, x).
  std::span<const Point> points() const { return points_; }
  std::span<const Point> row(Time t) const;
  /// Rows of the points in column x, ascending.
  std::span<const Time> column(Key x) const;

  std::optional<PointKind> kind_at(Key x, Time t) const;
  bool contains(Key x, Time t) const { return kind_at(x, t).has_value(); }
  std::vector<Cell> cells() const;

  friend bool operator==(const PointSet& a, const PointSet& b);

 private:
  void build();

  UpdateSequence sequence_;
  std::vector<Point> points_;
  std::vector<std::size_t> row_offset_;
  std::vector<std::size_t> column_offset_;
  std::vector<Time> column_times_;
};

/// Three-case validity rule on the nearest update points below/above (x,t).
/// Throws RangeError outside the grid.
bool is_valid_point(const UpdateSequence& s, Key x, Time t);
bool is_valid_point(const PointSet& p, Key x, Time t);

/// First point of P that fails is_valid_point, in (t, x) order.
std::optional<Point> first_invalid_point(const PointSet& p);
bool is_valid_set(const PointSet& p);

/// Maximal lifetime around p.t in column p.x. Throws ModelError if (p.x, p.t)
/// is not valid.
ActiveInterval active_interval(const UpdateSequence& s, Cell p);
ActiveInterval active_interval(const PointSet& p, Cell c);

/// p and q are both active from min(p.t, q.t) to max(p.t, q.t).
bool is_active_pair(const UpdateSequence& s, Cell p, Cell q);

/// Largest x' < p.x with (x', p.t) valid; nullopt at the left boundary.
std::optional<Cell> pred_point(const PointSet& p, Cell c);
/// Smallest x' > p.x with (x', p.t) valid.
std::optional<Cell> succ_point(const PointSet& p, Cell c);

struct Violation {
  enum class Kind { EmptyRectangle, UntouchedNeighbor };
  Kind kind = Kind::EmptyRectangle;
  /// EmptyRectangle: the lower point of the pair. UntouchedNeighbor: the
  /// update point.
  Point first;
  /// EmptyRectangle: the upper point of the pair. Unused otherwise.
  Point second;

  std::string describe() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct SatisfactionResult {
  bool satisfied = true;
  std::optional<Violation> witness;

  explicit operator bool() const { return satisfied; }
};

/// Arboreal satisfaction of a valid point set. Pair violations are reported
/// before neighbor violations; among pairs the smallest by (lower.t,
/// lower.x, upper.t, upper.x) is returned, among update points the earliest.
/// With up_to > 0 only pairs and update points within rows <= up_to are
/// checked. Throws ModelError naming the first invalid point.
SatisfactionResult is_satisfied(const PointSet& p, Time up_to = 0);

struct SideWitness {
  Point near_lower;
  Point near_upper;
};

/// For an active pair p, q (p.t < q.t, not aligned) of a satisfied set,
/// returns a point on a side of the rectangle incident to p that is a
/// non-deletion point or the corner (p.x, q.t), and one on a side incident to
/// q that is a non-insertion point or the corner (q.x, p.t). Throws ModelError
/// if a precondition fails or no such point exists.
SideWitness side_fact_witness(const PointSet& p, Cell lower, Cell upper);

}  // namespace geobst
