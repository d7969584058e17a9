#include <algorithm>
#include <set>
#include <tuple>

#include "geobst/model.hpp"
#include "last_touch_index.hpp"

namespace geobst {

namespace {

auto pair_order(const Violation& v) {
  return std::make_tuple(v.first.t, v.first.x, v.second.t, v.second.x);
}

}  // namespace

SatisfactionResult is_satisfied(const PointSet& p, Time up_to) {
  if (auto bad = first_invalid_point(p)) {
    throw ModelError("point " + to_string(*bad) + " is not valid");
  }
  const UpdateSequence& seq = p.sequence();
  const Key n = p.universe();
  const Time last_row = up_to > 0 ? std::min(up_to, p.horizon()) : p.horizon();

  detail::LastTouchIndex index(n);
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(n) + 2, 0);
  std::set<Key> alive_keys;
  for (Key x = 1; x <= n; ++x) {
    if (seq.initially_present(x)) {
      alive[static_cast<std::size_t>(x)] = 1;
      alive_keys.insert(x);
    }
  }

  std::optional<Violation> best_pair;
  std::optional<Violation> first_neighbor;

  for (Time t = 1; t <= last_row; ++t) {
    const auto row = p.row(t);
    const Key lo_alive = alive_keys.empty() ? 1 : *alive_keys.begin();
    const Key hi_alive = alive_keys.empty() ? 0 : *alive_keys.rbegin();

    // Pair condition with the row-t point as the upper corner. Beyond the
    // nearest non-insertion point of the same row every rectangle has that
    // point on its top edge.
    for (std::size_t j = 0; j < row.size(); ++j) {
      const Point& q = row[j];
      if (q.kind == PointKind::Insert) continue;
      Key right_limit = hi_alive + 1;
      for (std::size_t k = j + 1; k < row.size(); ++k) {
        if (row[k].kind != PointKind::Insert) {
          right_limit = std::min(right_limit, row[k].x);
          break;
        }
      }
      Key left_limit = lo_alive - 1;
      for (std::size_t k = j; k-- > 0;) {
        if (row[k].kind != PointKind::Insert) {
          left_limit = std::max(left_limit, row[k].x);
          break;
        }
      }
      auto report = [&](Key c) {
        if (!alive[static_cast<std::size_t>(c)]) return;
        const Time s = index.last(c);
        Violation v{Violation::Kind::EmptyRectangle, Point{c, s, *p.kind_at(c, s)}, q};
        if (!best_pair || pair_order(v) < pair_order(*best_pair)) best_pair = v;
      };
      if (right_limit > q.x) index.walk(q.x, right_limit, report);
      if (left_limit < q.x) index.walk(q.x, left_limit, report);
    }

    const Op& op = seq.op(t);
    if (op.kind != OpKind::Access && !first_neighbor) {
      auto above = alive_keys.upper_bound(op.key);
      auto below = alive_keys.lower_bound(op.key);
      if (above != alive_keys.end() && below != alive_keys.begin()) {
        const Key pred = *std::prev(below);
        const Key succ = *above;
        if (!p.contains(pred, t) && !p.contains(succ, t)) {
          first_neighbor = Violation{Violation::Kind::UntouchedNeighbor,
                                     Point{op.key, t, point_kind(op.kind)}, Point{}};
        }
      }
    }

    for (const Point& q : row) index.touch(q.x, t, q.kind == PointKind::Delete);
    if (op.kind == OpKind::Insert) {
      alive[static_cast<std::size_t>(op.key)] = 1;
      alive_keys.insert(op.key);
    } else if (op.kind == OpKind::Delete) {
      alive[static_cast<std::size_t>(op.key)] = 0;
      alive_keys.erase(op.key);
    }
  }

  SatisfactionResult result;
  if (best_pair) {
    result.satisfied = false;
    result.witness = best_pair;
  } else if (first_neighbor) {
    result.satisfied = false;
    result.witness = first_neighbor;
  }
  return result;
}

SideWitness side_fact_witness(const PointSet& p, Cell lower, Cell upper) {
  if (!p.contains(lower.x, lower.t) || !p.contains(upper.x, upper.t)) {
    throw ModelError("side witness: both points must belong to the set");
  }
  if (lower.x == upper.x || lower.t == upper.t) {
    throw ModelError("side witness: pair is axis-aligned");
  }
  if (lower.t > upper.t) std::swap(lower, upper);
  if (!is_active_pair(p.sequence(), lower, upper)) {
    throw ModelError("side witness: not an active pair");
  }
  if (!is_satisfied(p)) throw ModelError("side witness: point set is not satisfied");

  const Key x_lo = std::min(lower.x, upper.x);
  const Key x_hi = std::max(lower.x, upper.x);
  const int toward_upper = upper.x > lower.x ? 1 : -1;

  auto is_pair_end = [&](Key x, Time t) {
    return (x == lower.x && t == lower.t) || (x == upper.x && t == upper.t);
  };
  auto at = [&](Key x, Time t) -> std::optional<Point> {
    if (is_pair_end(x, t)) return std::nullopt;
    if (auto k = p.kind_at(x, t)) return Point{x, t, *k};
    return std::nullopt;
  };

  std::optional<Point> near_lower;
  // Bottom edge, walking away from the lower corner.
  for (Key x = lower.x + toward_upper; x_lo <= x && x <= x_hi && !near_lower; x += toward_upper) {
    if (auto r = at(x, lower.t); r && r->kind != PointKind::Delete) near_lower = r;
  }
  for (Time t = lower.t + 1; t <= upper.t && !near_lower; ++t) {
    if (auto r = at(lower.x, t); r && (r->kind != PointKind::Delete || t == upper.t)) near_lower = r;
  }

  std::optional<Point> near_upper;
  for (Key x = upper.x - toward_upper; x_lo <= x && x <= x_hi && !near_upper; x -= toward_upper) {
    if (auto r = at(x, upper.t); r && r->kind != PointKind::Insert) near_upper = r;
  }
  for (Time t = upper.t - 1; t >= lower.t && !near_upper; --t) {
    if (auto r = at(upper.x, t); r && (r->kind != PointKind::Insert || t == lower.t)) near_upper = r;
  }

  if (!near_lower || !near_upper) {
    throw ModelError("side witness: no qualifying point on a side incident to " +
                     std::string(near_lower ? "the upper corner" : "the lower corner"));
  }
  return {*near_lower, *near_upper};
}

}  // namespace geobst
