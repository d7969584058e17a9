#include "geobst/greedy.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "last_touch_index.hpp"

namespace geobst {

struct GreedyRunner::State {
  explicit State(UpdateSequence s)
      : seq(std::move(s)), index(seq.universe()), alive(static_cast<std::size_t>(seq.universe()) + 2, 0) {
    for (Key x = 1; x <= seq.universe(); ++x) {
      if (seq.initially_present(x)) {
        alive[static_cast<std::size_t>(x)] = 1;
        alive_keys.insert(x);
      }
    }
  }

  Key lo_limit() const { return alive_keys.empty() ? 0 : *alive_keys.begin() - 1; }
  Key hi_limit() const { return alive_keys.empty() ? 1 : *alive_keys.rbegin() + 1; }
  bool is_alive(Key c) const { return alive[static_cast<std::size_t>(c)] != 0; }

  // Owner column plus the live partner columns between the two exclusive
  // limits, ascending.
  std::vector<Key> stair_columns(Key owner, Key left_limit, Key right_limit) const {
    std::vector<Key> out;
    if (left_limit < owner) {
      index.walk(owner, left_limit, [&](Key c) {
        if (is_alive(c)) out.push_back(c);
      });
      std::reverse(out.begin(), out.end());
    }
    out.push_back(owner);
    if (right_limit > owner) {
      index.walk(owner, right_limit, [&](Key c) {
        if (is_alive(c)) out.push_back(c);
      });
    }
    return out;
  }

  std::vector<Key> compute_row() const {
    const Op& op = seq.op(next);
    const Key x = op.key;
    const Key lo = lo_limit();
    const Key hi = hi_limit();

    std::vector<Key> own = op.kind == OpKind::Insert ? std::vector<Key>{x} : stair_columns(x, lo, hi);
    if (op.kind == OpKind::Access) return own;

    auto above = alive_keys.upper_bound(x);
    auto below = alive_keys.lower_bound(x);
    if (above == alive_keys.end() || below == alive_keys.begin()) return own;
    const Key pred = *std::prev(below);
    const Key succ = *above;

    // A deletion point on row t blocks the neighbor's stair beyond it; an
    // insertion point does not.
    const bool deleting = op.kind == OpKind::Delete;
    auto with_pred = stair_columns(pred, lo, deleting ? x : hi);
    auto with_succ = stair_columns(succ, deleting ? x : lo, hi);

    auto unite = [&](const std::vector<Key>& extra) {
      std::vector<Key> u;
      u.reserve(own.size() + extra.size());
      std::set_union(own.begin(), own.end(), extra.begin(), extra.end(), std::back_inserter(u));
      return u;
    };
    auto a = unite(with_pred);
    auto b = unite(with_succ);
    return a.size() <= b.size() ? a : b;
  }

  void commit(std::span<const Key> keys) {
    const Op& op = seq.op(next);
    for (Key c : keys) {
      const bool valid = is_alive(c) || c == op.key;
      if (!valid) {
        throw ModelError("row " + std::to_string(next) + " touches dead key " + std::to_string(c));
      }
      index.touch(c, next, op.kind == OpKind::Delete && c == op.key);
    }
    if (op.kind == OpKind::Insert) {
      alive[static_cast<std::size_t>(op.key)] = 1;
      alive_keys.insert(op.key);
    } else if (op.kind == OpKind::Delete) {
      alive[static_cast<std::size_t>(op.key)] = 0;
      alive_keys.erase(op.key);
    }
    ++next;
  }

  UpdateSequence seq;
  detail::LastTouchIndex index;
  std::vector<std::uint8_t> alive;
  std::set<Key> alive_keys;
  Time next = 1;
};

GreedyRunner::GreedyRunner(UpdateSequence sequence) : state_(std::make_unique<State>(std::move(sequence))) {}
GreedyRunner::~GreedyRunner() = default;
GreedyRunner::GreedyRunner(GreedyRunner&&) noexcept = default;
GreedyRunner& GreedyRunner::operator=(GreedyRunner&&) noexcept = default;

const UpdateSequence& GreedyRunner::sequence() const { return state_->seq; }
Time GreedyRunner::next_row() const { return state_->next; }
bool GreedyRunner::done() const { return state_->next > state_->seq.length(); }

std::vector<Key> GreedyRunner::step() {
  if (done()) throw RangeError("GREEDY already consumed the whole sequence");
  auto row = state_->compute_row();
  state_->commit(row);
  return row;
}

void GreedyRunner::commit(std::span<const Key> keys) {
  if (done()) throw RangeError("GREEDY already consumed the whole sequence");
  state_->commit(keys);
}

namespace {

std::vector<Key> row_keys(const PointSet& p, Time t) {
  std::vector<Key> keys;
  for (const Point& q : p.row(t)) keys.push_back(q.x);
  return keys;
}

GreedyRunner replay_below(const PointSet& p, Time t) {
  GreedyRunner runner(p.sequence());
  for (Time s = 1; s < t; ++s) runner.commit(row_keys(p, s));
  return runner;
}

}  // namespace

Stair stair(const PointSet& p, Key x, Time t) {
  if (!is_valid_point(p, x, t)) {
    throw ModelError("stair owner (" + std::to_string(x) + "," + std::to_string(t) + ") is not valid");
  }
  const auto owner_kind = p.kind_at(x, t).value_or(PointKind::Touched);
  Stair out{Point{x, t, owner_kind}, {Point{x, t, owner_kind}}};
  // An insertion point starts its lifetime at t, so it has no lower partner.
  if (owner_kind == PointKind::Insert) return out;

  detail::LastTouchIndex index(p.universe());
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(p.universe()) + 2, 0);
  for (Key c = 1; c <= p.universe(); ++c) alive[static_cast<std::size_t>(c)] = p.sequence().initially_present(c);
  for (Time s = 1; s < t; ++s) {
    for (const Point& q : p.row(s)) index.touch(q.x, s, q.kind == PointKind::Delete);
    const Op& op = p.sequence().op(s);
    if (op.kind == OpKind::Insert) alive[static_cast<std::size_t>(op.key)] = 1;
    if (op.kind == OpKind::Delete) alive[static_cast<std::size_t>(op.key)] = 0;
  }

  Key right_limit = p.universe() + 1;
  Key left_limit = 0;
  for (const Point& q : p.row(t)) {
    if (q.x == x || q.kind == PointKind::Insert) continue;
    if (q.x > x) right_limit = std::min(right_limit, q.x);
    if (q.x < x) left_limit = std::max(left_limit, q.x);
  }

  std::vector<Point> left;
  auto collect = [&](std::vector<Point>& into) {
    return [&](Key c) {
      if (!alive[static_cast<std::size_t>(c)]) return;
      const Time s = index.last(c);
      into.push_back(Point{c, s, *p.kind_at(c, s)});
    };
  };
  if (left_limit < x) index.walk(x, left_limit, collect(left));
  std::vector<Point> right;
  if (right_limit > x) index.walk(x, right_limit, collect(right));

  out.members.insert(out.members.end(), left.rbegin(), left.rend());
  out.members.insert(out.members.end(), right.begin(), right.end());
  std::sort(out.members.begin() + 1, out.members.end(),
            [](const Point& a, const Point& b) { return a.x < b.x; });
  return out;
}

std::vector<Point> greedy_step(const PointSet& p, Op op, Time t) {
  const UpdateSequence& seq = p.sequence();
  if (t < 1 || t > seq.length()) throw RangeError("timestep " + std::to_string(t) + " out of range");
  if (!(seq.op(t) == op)) {
    throw SequenceError("op at t=" + std::to_string(t) + " does not match the point set's sequence");
  }
  if (!is_valid_point(p, op.key, t)) {
    throw ModelError("input cell (" + std::to_string(op.key) + "," + std::to_string(t) + ") is not valid");
  }
  GreedyRunner runner = replay_below(p, t);
  std::vector<Point> row;
  for (Key c : runner.step()) {
    row.push_back(Point{c, t, c == op.key ? point_kind(op.kind) : PointKind::Touched});
  }
  return row;
}

GreedyResult greedy_execute(const UpdateSequence& s) {
  GreedyRunner runner(s);
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(s.length()) * 4);
  while (!runner.done()) {
    const Time t = runner.next_row();
    for (Key c : runner.step()) cells.push_back({c, t});
  }
  GreedyResult result{PointSet(s, cells), 0};
  result.cost = static_cast<std::int64_t>(result.points.size());
  return result;
}

}  // namespace geobst
