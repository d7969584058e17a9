#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "geobst/model.hpp"

namespace geobst::detail {

// Per-column record of the most recent point below the current row, plus a
// max segment tree for "next column whose last point is higher than h" walks.
//
// Levels order points by row with deletion points just below ordinary points
// of the same row: level = 2t for a deletion point, 2t + 1 otherwise, 0 for an
// empty column. A point at row s blocks a rectangle whose bottom row is b iff
// its level exceeds 2b, i.e. a deletion point sitting on the bottom row does
// not block. A column's last point p is an unblocked partner iff
// 2 * p.t + 1 exceeds the max level seen between the owner and p.
class LastTouchIndex {
 public:
  explicit LastTouchIndex(Key universe) : n_(universe), level_(static_cast<std::size_t>(universe) + 1, 0) {
    size_ = 1;
    while (size_ < n_ + 2) size_ <<= 1;
    reach_.assign(2 * static_cast<std::size_t>(size_), 0);
  }

  Key universe() const { return n_; }

  void touch(Key x, Time t, bool deletion) {
    level_[static_cast<std::size_t>(x)] = deletion ? 2 * t : 2 * t + 1;
    std::size_t i = static_cast<std::size_t>(size_) + static_cast<std::size_t>(x);
    reach_[i] = 2 * t + 1;
    for (i >>= 1; i >= 1; i >>= 1) reach_[i] = std::max(reach_[2 * i], reach_[2 * i + 1]);
  }

  std::int32_t level(Key x) const { return level_[static_cast<std::size_t>(x)]; }
  /// Row of the last point in column x, 0 if none.
  Time last(Key x) const { return level_[static_cast<std::size_t>(x)] / 2; }
  bool last_is_deletion(Key x) const {
    const auto l = level_[static_cast<std::size_t>(x)];
    return l > 0 && l % 2 == 0;
  }

  /// Smallest c with from < c < to and reach(c) > threshold; 0 if none.
  Key next_above(Key from, Key to, std::int32_t threshold) const {
    if (to - from < 2) return 0;
    return first_in(1, 0, size_ - 1, from + 1, to - 1, threshold);
  }

  /// Largest c with to < c < from and reach(c) > threshold; 0 if none.
  Key prev_above(Key from, Key to, std::int32_t threshold) const {
    if (from - to < 2) return 0;
    return last_in(1, 0, size_ - 1, to + 1, from - 1, threshold);
  }

  /// Calls visit(c) for every candidate partner of an owner in column
  /// `owner`, walking away from it towards `limit` (exclusive).
  template <class Visit>
  void walk(Key owner, Key limit, Visit&& visit) const {
    std::int32_t blocked = level(owner);
    Key pos = owner;
    for (;;) {
      const Key c = limit > owner ? next_above(pos, limit, blocked) : prev_above(pos, limit, blocked);
      if (c == 0) break;
      visit(c);
      blocked = std::max(blocked, level(c));
      pos = c;
    }
  }

 private:
  Key first_in(std::size_t node, Key lo, Key hi, Key a, Key b, std::int32_t thr) const {
    if (hi < a || lo > b || reach_[node] <= thr) return 0;
    if (lo == hi) return lo;
    const Key mid = lo + (hi - lo) / 2;
    if (Key r = first_in(2 * node, lo, mid, a, b, thr)) return r;
    return first_in(2 * node + 1, mid + 1, hi, a, b, thr);
  }

  Key last_in(std::size_t node, Key lo, Key hi, Key a, Key b, std::int32_t thr) const {
    if (hi < a || lo > b || reach_[node] <= thr) return 0;
    if (lo == hi) return lo;
    const Key mid = lo + (hi - lo) / 2;
    if (Key r = last_in(2 * node + 1, mid + 1, hi, a, b, thr)) return r;
    return last_in(2 * node, lo, mid, a, b, thr);
  }

  Key n_;
  Key size_ = 1;
  std::vector<std::int32_t> level_;
  std::vector<std::int32_t> reach_;
};

}  // namespace geobst::detail
