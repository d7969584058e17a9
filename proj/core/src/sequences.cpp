#include "geobst/sequences.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "geobst/rng.hpp"

namespace geobst {

namespace {

std::set<Key> initial_members(const UpdateSequence& s) {
  std::set<Key> live;
  for (Key x = 1; x <= s.universe(); ++x) {
    if (s.initially_present(x)) live.insert(x);
  }
  return live;
}

}  // namespace

UpdateSequence compress_universe(const UpdateSequence& s) {
  std::vector<Key> label(static_cast<std::size_t>(s.universe()) + 1, 0);
  for (const Op& op : s.ops()) label[static_cast<std::size_t>(op.key)] = 1;
  Key next = 0;
  for (auto& l : label) {
    if (l) l = ++next;
  }
  std::vector<Op> ops;
  ops.reserve(s.ops().size());
  for (const Op& op : s.ops()) ops.push_back({label[static_cast<std::size_t>(op.key)], op.kind});
  return UpdateSequence(next, std::move(ops));
}

UpdateSequence gen_deque(Key n, Time m, std::uint64_t seed, bool restricted, const DequeOptions& options) {
  if (n < 1 || m < 1) throw RangeError("gen_deque needs n >= 1 and m >= 1");
  Rng rng(seed);
  std::set<Key> live;
  for (Key x = 1; x <= n; ++x) {
    if (rng.chance(options.initial_density)) live.insert(x);
  }

  std::vector<Op> ops;
  ops.reserve(static_cast<std::size_t>(m));
  for (Time t = 1; t <= m; ++t) {
    const Key lo = live.empty() ? n + 1 : *live.begin();
    const Key hi = live.empty() ? 0 : *live.rbegin();
    const bool room_below = lo > 1;
    const bool room_above = hi < n;
    const bool can_insert = live.empty() || room_below || room_above;
    const bool can_delete = !live.empty();
    const bool insert = can_insert && (!can_delete || rng.chance(options.insert_bias));

    if (insert) {
      Key x;
      if (live.empty()) {
        x = static_cast<Key>(rng.between(1, n));
      } else {
        bool at_min = rng.chance(options.min_bias);
        if (at_min && !room_below) at_min = false;
        if (!at_min && !room_above) at_min = true;
        x = at_min ? static_cast<Key>(rng.between(1, lo - 1)) : static_cast<Key>(rng.between(hi + 1, n));
      }
      live.insert(x);
      ops.push_back({x, OpKind::Insert});
    } else {
      const bool at_min = restricted || rng.chance(options.min_bias);
      const Key x = at_min ? lo : hi;
      live.erase(x);
      ops.push_back({x, OpKind::Delete});
    }
  }

  // Keys whose first op is a delete were in the initial tree; the rest of the
  // sampled initial set never shows up and is dropped.
  return compress_universe(UpdateSequence(n, std::move(ops)));
}

std::vector<DequeOp> classify_deque(const UpdateSequence& s) {
  std::set<Key> live = initial_members(s);
  std::vector<DequeOp> out;
  out.reserve(s.ops().size());
  Time t = 0;
  for (const Op& op : s.ops()) {
    ++t;
    const std::string where = " at t=" + std::to_string(t);
    switch (op.kind) {
      case OpKind::Access:
        throw ShapeError("deque sequences have no accesses; found one" + where);
      case OpKind::Insert: {
        DequeSide side;
        if (live.empty() || op.key > *live.rbegin()) {
          side = DequeSide::Max;
        } else if (op.key < *live.begin()) {
          side = DequeSide::Min;
        } else {
          throw ShapeError("insert of " + std::to_string(op.key) + " is not at an extreme" + where);
        }
        live.insert(op.key);
        out.push_back({side, OpKind::Insert});
        break;
      }
      case OpKind::Delete: {
        DequeSide side;
        if (op.key == *live.begin()) {
          side = DequeSide::Min;
        } else if (op.key == *live.rbegin()) {
          side = DequeSide::Max;
        } else {
          throw ShapeError("delete of " + std::to_string(op.key) + " is not at an extreme" + where);
        }
        live.erase(op.key);
        out.push_back({side, OpKind::Delete});
        break;
      }
    }
  }
  return out;
}

bool is_output_restricted(const UpdateSequence& s) {
  const auto sides = classify_deque(s);
  return std::none_of(sides.begin(), sides.end(),
                      [](const DequeOp& d) { return d.kind == OpKind::Delete && d.side == DequeSide::Max; });
}

ConcentrationCheck is_concentrated(const UpdateSequence& s) {
  const auto sides = classify_deque(s);
  std::set<Key> live = initial_members(s);
  // Only the largest of L and the smallest of R matter.
  Key max_l = std::numeric_limits<Key>::min();
  Key min_r = std::numeric_limits<Key>::max();
  for (Time t = 1; t <= s.length(); ++t) {
    const Op& op = s.op(t);
    if (op.kind == OpKind::Insert) {
      const bool is_min = live.empty() || op.key < *live.begin();
      const bool is_max = live.empty() || op.key > *live.rbegin();
      if ((is_min && op.key <= max_l) || (is_max && op.key >= min_r)) return {false, t};
      live.insert(op.key);
    } else {
      if (sides[static_cast<std::size_t>(t - 1)].side == DequeSide::Min) {
        max_l = std::max(max_l, op.key);
      } else {
        min_r = std::min(min_r, op.key);
      }
      live.erase(op.key);
    }
  }
  return {};
}

UpdateSequence concentrate(const UpdateSequence& s) {
  const auto sides = classify_deque(s);
  const Key n = s.universe();

  // One lifetime per (key, insertion); lifetime ids index these vectors.
  std::vector<std::size_t> current(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Key> key_of;
  std::vector<Time> end_time;
  std::vector<int> end_side;  // 0 alive at the end, 1 min-deleted, 2 max-deleted
  auto open = [&](Key x) {
    current[static_cast<std::size_t>(x)] = key_of.size();
    key_of.push_back(x);
    end_time.push_back(0);
    end_side.push_back(0);
  };
  for (Key x = 1; x <= n; ++x) {
    if (s.initially_present(x)) open(x);
  }
  std::vector<std::size_t> op_life(static_cast<std::size_t>(s.length()));
  for (Time t = 1; t <= s.length(); ++t) {
    const Op& op = s.op(t);
    if (op.kind == OpKind::Insert) open(op.key);
    const std::size_t id = current[static_cast<std::size_t>(op.key)];
    op_life[static_cast<std::size_t>(t - 1)] = id;
    if (op.kind == OpKind::Delete) {
      end_time[id] = t;
      end_side[id] = sides[static_cast<std::size_t>(t - 1)].side == DequeSide::Min ? 1 : 2;
    }
  }

  std::vector<std::size_t> order(key_of.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    static constexpr int band[] = {1, 0, 2};
    if (end_side[a] != end_side[b]) return band[end_side[a]] < band[end_side[b]];
    switch (end_side[a]) {
      case 1: return end_time[a] < end_time[b];
      case 2: return end_time[a] > end_time[b];
      default: return key_of[a] < key_of[b];
    }
  });
  std::vector<Key> label(key_of.size());
  for (std::size_t i = 0; i < order.size(); ++i) label[order[i]] = static_cast<Key>(i + 1);

  std::vector<Op> ops;
  ops.reserve(static_cast<std::size_t>(s.length()));
  for (Time t = 1; t <= s.length(); ++t) {
    ops.push_back({label[op_life[static_cast<std::size_t>(t - 1)]], s.op(t).kind});
  }
  return UpdateSequence(static_cast<Key>(key_of.size()), std::move(ops));
}

UpdateSequence sequential_as_deletions(Key n) {
  if (n < 1) throw RangeError("sequential_as_deletions needs n >= 1");
  std::vector<Op> ops;
  ops.reserve(static_cast<std::size_t>(n));
  for (Key x = 1; x <= n; ++x) ops.push_back({x, OpKind::Delete});
  return UpdateSequence(n, std::move(ops));
}

UpdateSequence random_permutation_access(Key n, std::uint64_t seed) {
  if (n < 1) throw RangeError("random_permutation_access needs n >= 1");
  Rng rng(seed);
  std::vector<Key> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  rng.shuffle(perm);
  std::vector<Op> ops;
  ops.reserve(perm.size());
  for (Key x : perm) ops.push_back({x, OpKind::Access});
  return UpdateSequence(n, std::move(ops));
}

UpdateSequence random_update_sequence(Key n, Time m, std::uint64_t seed, const MixOptions& options) {
  if (n < 1 || m < 1) throw RangeError("random_update_sequence needs n >= 1 and m >= 1");
  Rng rng(seed);
  std::vector<Key> present, absent;
  std::vector<std::size_t> slot(static_cast<std::size_t>(n) + 1);
  auto place = [&](std::vector<Key>& v, Key x) {
    slot[static_cast<std::size_t>(x)] = v.size();
    v.push_back(x);
  };
  auto take = [&](std::vector<Key>& v, std::size_t i) {
    const Key x = v[i];
    v[i] = v.back();
    slot[static_cast<std::size_t>(v[i])] = i;
    v.pop_back();
    return x;
  };
  for (Key x = 1; x <= n; ++x) place(rng.chance(options.initial_density) ? present : absent, x);

  std::vector<Op> ops;
  ops.reserve(static_cast<std::size_t>(m));
  const double total = options.access + options.insert + options.remove;
  for (Time t = 1; t <= m; ++t) {
    const double u = rng.unit() * total;
    OpKind kind = u < options.access ? OpKind::Access
                  : u < options.access + options.insert ? OpKind::Insert
                                                        : OpKind::Delete;
    if (kind != OpKind::Insert && present.empty()) kind = OpKind::Insert;
    if (kind == OpKind::Insert && absent.empty()) kind = OpKind::Access;
    switch (kind) {
      case OpKind::Access:
        ops.push_back({present[rng.below(present.size())], kind});
        break;
      case OpKind::Insert: {
        const Key x = take(absent, rng.below(absent.size()));
        place(present, x);
        ops.push_back({x, kind});
        break;
      }
      case OpKind::Delete: {
        const Key x = take(present, rng.below(present.size()));
        place(absent, x);
        ops.push_back({x, kind});
        break;
      }
    }
  }
  // Absent keys that are never inserted would count as initially present;
  // the model agrees with the generator only on keys that do appear.
  return UpdateSequence(n, std::move(ops));
}

}  // namespace geobst
