#include "geobst/model.hpp"

#include <algorithm>
#include <sstream>

namespace geobst {

namespace detail {

struct ColumnIndex {
  Key universe = 0;
  std::vector<Op> ops;
  // CSR over keys 1..universe (offset[x]..offset[x+1]).
  std::vector<std::uint32_t> update_offset;
  std::vector<Time> update_time;
  std::vector<OpKind> update_kind;
  std::vector<std::uint32_t> life_offset;
  std::vector<ActiveInterval> lifetimes;
  std::vector<std::uint8_t> present0;
  std::vector<std::uint8_t> used;
};

}  // namespace detail

namespace {

std::string cell_string(Key x, Time t) {
  std::ostringstream os;
  os << "(" << x << "," << t << ")";
  return os.str();
}

std::shared_ptr<const detail::ColumnIndex> build_index(Key universe, std::vector<Op> ops) {
  if (universe < 0) throw RangeError("negative key universe");
  auto index = std::make_shared<detail::ColumnIndex>();
  index->universe = universe;
  index->ops = std::move(ops);
  const auto& seq = index->ops;
  const auto n = static_cast<std::size_t>(universe);
  const Time m = static_cast<Time>(seq.size());

  std::vector<std::uint32_t> count(n + 2, 0);
  index->used.assign(n + 1, 0);
  for (Time t = 1; t <= m; ++t) {
    const Op& op = seq[t - 1];
    if (op.key < 1 || op.key > universe) {
      throw RangeError("key " + std::to_string(op.key) + " at t=" + std::to_string(t) +
                       " outside [1," + std::to_string(universe) + "]");
    }
    index->used[op.key] = 1;
    if (op.kind != OpKind::Access) ++count[op.key];
  }

  index->update_offset.assign(n + 2, 0);
  for (std::size_t x = 1; x <= n; ++x) index->update_offset[x + 1] = index->update_offset[x] + count[x];
  index->update_time.resize(index->update_offset[n + 1]);
  index->update_kind.resize(index->update_offset[n + 1]);
  std::vector<std::uint32_t> fill(index->update_offset.begin(), index->update_offset.end() - 1);
  for (Time t = 1; t <= m; ++t) {
    const Op& op = seq[t - 1];
    if (op.kind == OpKind::Access) continue;
    const auto slot = fill[op.key]++;
    index->update_time[slot] = t;
    index->update_kind[slot] = op.kind;
  }

  // Initial membership follows from the first update of each key.
  index->present0.assign(n + 1, 1);
  for (std::size_t x = 1; x <= n; ++x) {
    const auto b = index->update_offset[x];
    if (b != index->update_offset[x + 1] && index->update_kind[b] == OpKind::Insert) {
      index->present0[x] = 0;
    }
  }

  std::vector<std::uint8_t> present(index->present0);
  for (Time t = 1; t <= m; ++t) {
    const Op& op = seq[t - 1];
    const bool here = present[op.key] != 0;
    switch (op.kind) {
      case OpKind::Access:
        if (!here) {
          throw SequenceError("access to absent key " + std::to_string(op.key) +
                              " at t=" + std::to_string(t));
        }
        break;
      case OpKind::Insert:
        if (here) {
          throw SequenceError("insert of present key " + std::to_string(op.key) +
                              " at t=" + std::to_string(t));
        }
        present[op.key] = 1;
        break;
      case OpKind::Delete:
        if (!here) {
          throw SequenceError("delete of absent key " + std::to_string(op.key) +
                              " at t=" + std::to_string(t));
        }
        present[op.key] = 0;
        break;
    }
  }

  index->life_offset.assign(n + 2, 0);
  for (std::size_t x = 1; x <= n; ++x) {
    std::optional<ActiveInterval> open;
    if (index->present0[x]) open = ActiveInterval{1, m, true, false};
    for (auto i = index->update_offset[x]; i < index->update_offset[x + 1]; ++i) {
      const Time t = index->update_time[i];
      if (index->update_kind[i] == OpKind::Insert) {
        open = ActiveInterval{t, m, false, false};
      } else {
        open->end = t;
        index->lifetimes.push_back(*open);
        open.reset();
      }
    }
    if (open) {
      open->end = m;
      open->to_horizon = true;
      index->lifetimes.push_back(*open);
    }
    index->life_offset[x + 1] = static_cast<std::uint32_t>(index->lifetimes.size());
  }
  return index;
}

void check_range(Key universe, Time horizon, Key x, Time t) {
  if (x < 1 || x > universe || t < 1 || t > horizon) {
    throw RangeError("cell " + cell_string(x, t) + " outside grid [1," + std::to_string(universe) +
                     "]x[1," + std::to_string(horizon) + "]");
  }
}

const ActiveInterval* lifetime_at(const UpdateSequence& s, Key x, Time t) {
  const auto lives = s.lifetimes(x);
  auto it = std::upper_bound(lives.begin(), lives.end(), t,
                             [](Time v, const ActiveInterval& a) { return v < a.begin; });
  if (it == lives.begin()) return nullptr;
  --it;
  return it->contains(t) ? &*it : nullptr;
}

}  // namespace

char to_char(OpKind kind) {
  switch (kind) {
    case OpKind::Access: return 'A';
    case OpKind::Insert: return 'I';
    case OpKind::Delete: return 'D';
  }
  return '?';
}

char to_char(PointKind kind) {
  switch (kind) {
    case PointKind::Access: return 'A';
    case PointKind::Insert: return 'I';
    case PointKind::Delete: return 'D';
    case PointKind::Touched: return 'T';
  }
  return '?';
}

PointKind point_kind(OpKind kind) {
  switch (kind) {
    case OpKind::Access: return PointKind::Access;
    case OpKind::Insert: return PointKind::Insert;
    case OpKind::Delete: return PointKind::Delete;
  }
  return PointKind::Touched;
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os << to_char(p.kind) << "(" << p.x << "," << p.t << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// UpdateSequence

UpdateSequence::UpdateSequence() : index_(build_index(0, {})) {}

UpdateSequence::UpdateSequence(Key universe, std::vector<Op> ops)
    : index_(build_index(universe, std::move(ops))) {}

Key UpdateSequence::universe() const { return index_->universe; }
Time UpdateSequence::length() const { return static_cast<Time>(index_->ops.size()); }

const Op& UpdateSequence::op(Time t) const {
  if (t < 1 || t > length()) throw RangeError("timestep " + std::to_string(t) + " out of range");
  return index_->ops[static_cast<std::size_t>(t - 1)];
}

std::span<const Op> UpdateSequence::ops() const { return index_->ops; }

bool UpdateSequence::initially_present(Key x) const {
  if (x < 1 || x > universe()) throw RangeError("key " + std::to_string(x) + " out of range");
  return index_->present0[x] != 0;
}

std::span<const Time> UpdateSequence::update_times(Key x) const {
  if (x < 1 || x > universe()) throw RangeError("key " + std::to_string(x) + " out of range");
  const auto b = index_->update_offset[x];
  const auto e = index_->update_offset[x + 1];
  return std::span<const Time>(index_->update_time).subspan(b, e - b);
}

std::span<const ActiveInterval> UpdateSequence::lifetimes(Key x) const {
  if (x < 1 || x > universe()) throw RangeError("key " + std::to_string(x) + " out of range");
  const auto b = index_->life_offset[x];
  const auto e = index_->life_offset[x + 1];
  return std::span<const ActiveInterval>(index_->lifetimes).subspan(b, e - b);
}

std::vector<Key> UpdateSequence::untouched_keys() const {
  std::vector<Key> out;
  for (Key x = 1; x <= universe(); ++x) {
    if (!index_->used[x]) out.push_back(x);
  }
  return out;
}

void UpdateSequence::require_every_key_used() const {
  const auto missing = untouched_keys();
  if (!missing.empty()) {
    throw SequenceError("key " + std::to_string(missing.front()) + " never appears (" +
                        std::to_string(missing.size()) + " unused keys)");
  }
}

bool operator==(const UpdateSequence& a, const UpdateSequence& b) {
  return a.universe() == b.universe() && std::ranges::equal(a.ops(), b.ops());
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet() { build(); }

PointSet::PointSet(UpdateSequence sequence) : sequence_(std::move(sequence)) { build(); }

PointSet::PointSet(UpdateSequence sequence, std::span<const Cell> touched)
    : sequence_(std::move(sequence)) {
  const Key n = sequence_.universe();
  const Time m = sequence_.length();
  points_.reserve(touched.size() + static_cast<std::size_t>(m));
  for (const Cell& c : touched) {
    check_range(n, m, c.x, c.t);
    points_.push_back({c.x, c.t, PointKind::Touched});
  }
  build();
}

void PointSet::build() {
  const Time m = sequence_.length();
  const Key n = sequence_.universe();
  for (Time t = 1; t <= m; ++t) {
    const Op& op = sequence_.op(t);
    points_.push_back({op.key, t, point_kind(op.kind)});
  }
  // Input points sort before touched ones in the same cell, so unique keeps them.
  std::sort(points_.begin(), points_.end(), [](const Point& a, const Point& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.x != b.x) return a.x < b.x;
    return a.kind < b.kind;
  });
  points_.erase(std::unique(points_.begin(), points_.end(),
                            [](const Point& a, const Point& b) { return a.x == b.x && a.t == b.t; }),
                points_.end());

  row_offset_.assign(static_cast<std::size_t>(m) + 2, 0);
  for (const Point& p : points_) ++row_offset_[static_cast<std::size_t>(p.t) + 1];
  for (std::size_t i = 1; i < row_offset_.size(); ++i) row_offset_[i] += row_offset_[i - 1];

  column_offset_.assign(static_cast<std::size_t>(n) + 2, 0);
  for (const Point& p : points_) ++column_offset_[static_cast<std::size_t>(p.x) + 1];
  for (std::size_t i = 1; i < column_offset_.size(); ++i) column_offset_[i] += column_offset_[i - 1];
  column_times_.resize(points_.size());
  std::vector<std::size_t> fill(column_offset_.begin(), column_offset_.end() - 1);
  for (const Point& p : points_) column_times_[fill[static_cast<std::size_t>(p.x)]++] = p.t;
}

std::span<const Point> PointSet::row(Time t) const {
  if (t < 1 || t > horizon()) throw RangeError("row " + std::to_string(t) + " out of range");
  const auto b = row_offset_[static_cast<std::size_t>(t)];
  const auto e = row_offset_[static_cast<std::size_t>(t) + 1];
  return std::span<const Point>(points_).subspan(b, e - b);
}

std::span<const Time> PointSet::column(Key x) const {
  if (x < 1 || x > universe()) throw RangeError("column " + std::to_string(x) + " out of range");
  const auto b = column_offset_[static_cast<std::size_t>(x)];
  const auto e = column_offset_[static_cast<std::size_t>(x) + 1];
  return std::span<const Time>(column_times_).subspan(b, e - b);
}

std::optional<PointKind> PointSet::kind_at(Key x, Time t) const {
  check_range(universe(), horizon(), x, t);
  const auto r = row(t);
  auto it = std::lower_bound(r.begin(), r.end(), x, [](const Point& p, Key v) { return p.x < v; });
  if (it == r.end() || it->x != x) return std::nullopt;
  return it->kind;
}

std::vector<Cell> PointSet::cells() const {
  std::vector<Cell> out;
  out.reserve(points_.size());
  for (const Point& p : points_) out.push_back(p.cell());
  return out;
}

bool operator==(const PointSet& a, const PointSet& b) {
  return a.sequence_ == b.sequence_ && a.points_ == b.points_;
}

// ---------------------------------------------------------------------------
// Validity

bool is_valid_point(const UpdateSequence& s, Key x, Time t) {
  check_range(s.universe(), s.length(), x, t);
  const auto times = s.update_times(x);
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  const bool on_update = it != times.end() && *it == t;
  auto kind_of = [&](std::span<const Time>::iterator i) { return s.op(*i).kind; };

  std::optional<OpKind> below;
  std::optional<OpKind> above;
  if (it != times.begin()) below = kind_of(std::prev(it));
  auto next = on_update ? std::next(it) : it;
  if (next != times.end()) above = kind_of(next);

  auto absent_or = [](const std::optional<OpKind>& k, OpKind want) { return !k || *k == want; };
  if (!on_update) return absent_or(below, OpKind::Insert) && absent_or(above, OpKind::Delete);
  if (s.op(t).kind == OpKind::Insert) {
    return absent_or(below, OpKind::Delete) && absent_or(above, OpKind::Delete);
  }
  return absent_or(below, OpKind::Insert) && absent_or(above, OpKind::Insert);
}

bool is_valid_point(const PointSet& p, Key x, Time t) { return is_valid_point(p.sequence(), x, t); }

std::optional<Point> first_invalid_point(const PointSet& p) {
  for (const Point& q : p.points()) {
    if (!is_valid_point(p.sequence(), q.x, q.t)) return q;
  }
  return std::nullopt;
}

bool is_valid_set(const PointSet& p) { return !first_invalid_point(p).has_value(); }

ActiveInterval active_interval(const UpdateSequence& s, Cell c) {
  if (!is_valid_point(s, c.x, c.t)) {
    throw ModelError("cell " + cell_string(c.x, c.t) + " is not valid");
  }
  const ActiveInterval* life = lifetime_at(s, c.x, c.t);
  if (life == nullptr) {
    throw ModelError("no lifetime covers valid cell " + cell_string(c.x, c.t));
  }
  return *life;
}

ActiveInterval active_interval(const PointSet& p, Cell c) { return active_interval(p.sequence(), c); }

bool is_active_pair(const UpdateSequence& s, Cell p, Cell q) {
  const Time lo = std::min(p.t, q.t);
  const Time hi = std::max(p.t, q.t);
  const ActiveInterval* lp = lifetime_at(s, p.x, p.t);
  const ActiveInterval* lq = lifetime_at(s, q.x, q.t);
  return lp && lq && lp->contains(lo) && lp->contains(hi) && lq->contains(lo) && lq->contains(hi);
}

std::optional<Cell> pred_point(const PointSet& p, Cell c) {
  check_range(p.universe(), p.horizon(), c.x, c.t);
  for (Key x = c.x - 1; x >= 1; --x) {
    if (lifetime_at(p.sequence(), x, c.t)) return Cell{x, c.t};
  }
  return std::nullopt;
}

std::optional<Cell> succ_point(const PointSet& p, Cell c) {
  check_range(p.universe(), p.horizon(), c.x, c.t);
  for (Key x = c.x + 1; x <= p.universe(); ++x) {
    if (lifetime_at(p.sequence(), x, c.t)) return Cell{x, c.t};
  }
  return std::nullopt;
}

std::string Violation::describe() const {
  std::ostringstream os;
  if (kind == Kind::EmptyRectangle) {
    os << "empty rectangle between " << to_string(first) << " and " << to_string(second);
  } else {
    os << "update point " << to_string(first) << " touches neither neighbor";
  }
  return os.str();
}

}  // namespace geobst
