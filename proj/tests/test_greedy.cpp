#include <doctest.h>

#include <map>
#include <set>

#include "geobst/greedy.hpp"
#include "geobst/rng.hpp"
#include "geobst/sequences.hpp"
#include "oracles.hpp"

using namespace geobst;

namespace {

constexpr auto A = OpKind::Access;
constexpr auto I = OpKind::Insert;
constexpr auto D = OpKind::Delete;

std::vector<Key> columns(const std::vector<Point>& pts) {
  std::vector<Key> out;
  for (const Point& p : pts) out.push_back(p.x);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cell> rows_below(const PointSet& p, Time t) {
  std::vector<Cell> out;
  for (const Point& q : p.points()) {
    if (q.t < t) out.push_back(q.cell());
  }
  return out;
}

// Classic access-only GREEDY over last-touch times: y joins the row when
// the rectangle to its last touch holds nothing else.
std::set<Cell> classic_greedy(const UpdateSequence& s) {
  std::map<Key, Time> last;
  std::set<Cell> out;
  for (Time t = 1; t <= s.length(); ++t) {
    const Key x = s.op(t).key;
    std::vector<Key> row{x};
    for (const auto& [y, ty] : last) {
      if (y == x) continue;
      if (last.count(x) && last[x] >= ty) continue;
      bool empty = true;
      for (Key z = std::min(x, y) + 1; z < std::max(x, y); ++z) {
        if (last.count(z) && last[z] >= ty) empty = false;
      }
      if (empty) row.push_back(y);
    }
    for (Key y : row) {
      last[y] = t;
      out.insert({y, t});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("stair of an insertion point is the point alone") {
  const UpdateSequence s(3, {{1, A}, {3, A}, {2, I}});
  const PointSet p(s, std::vector<Cell>{{3, 1}, {1, 2}});
  const Stair st = stair(p, 2, 3);
  REQUIRE(st.members.size() == 1);
  CHECK(st.members.front().cell() == Cell{2, 3});
  CHECK(st.owner.kind == PointKind::Insert);
}

TEST_CASE("stair with empty history") {
  const UpdateSequence s(4, {{2, A}});
  const Stair st = stair(PointSet(s), 2, 1);
  CHECK(st.members.size() == 1);
}

TEST_CASE("staircase of three accesses") {
  const UpdateSequence s(6, {{1, A}, {3, A}, {5, A}, {6, A}});
  const PointSet p(s);
  const Stair st = stair(p, 6, 4);
  CHECK(columns(st.members) == std::vector<Key>{5, 6});
  CHECK(columns(st.members) == oracle::stair(oracle::grid_of(p), 6, 4));
  CHECK_THROWS_AS(stair(PointSet(UpdateSequence(2, {{1, I}, {1, D}, {2, A}})), 1, 3), ModelError);
}

TEST_CASE("stairs match the definition on random histories") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto s = random_update_sequence(7, 12, seed);
    const PointSet full = greedy_execute(s).points;
    for (Time t = 1; t <= s.length(); ++t) {
      const PointSet below(s, rows_below(full, t));
      const auto g = oracle::grid_of(below);
      for (Key x = 1; x <= s.universe(); ++x) {
        if (!oracle::valid(s, x, t)) continue;
        REQUIRE(columns(stair(below, x, t).members) == oracle::stair(g, x, t));
      }
    }
  }
}

TEST_CASE("insert at a new extreme touches only itself") {
  const UpdateSequence s(5, {{2, A}, {3, A}, {5, I}, {1, I}});
  const auto r = greedy_execute(s);
  CHECK(r.points.row(3).size() == 1);
  CHECK(r.points.row(4).size() == 1);
  const auto step = greedy_step(PointSet(s, rows_below(r.points, 3)), {5, I}, 3);
  REQUIRE(step.size() == 1);
  CHECK(step.front().kind == PointKind::Insert);
}

TEST_CASE("successive maximum inserts cost one each") {
  for (Key m : {1, 2, 10, 100}) {
    std::vector<Op> ops;
    for (Key k = 1; k <= m; ++k) ops.push_back({k, I});
    CHECK(greedy_execute(UpdateSequence(m, ops)).cost == m);
  }
}

TEST_CASE("every extreme insert contributes exactly one point") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto s = random_update_sequence(10, 30, seed);
    const auto r = greedy_execute(s);
    std::set<Key> alive;
    for (Key x = 1; x <= s.universe(); ++x) {
      if (s.initially_present(x)) alive.insert(x);
    }
    for (Time t = 1; t <= s.length(); ++t) {
      const Op& op = s.op(t);
      if (op.kind == I) {
        const bool extreme = alive.empty() || op.key < *alive.begin() || op.key > *alive.rbegin();
        if (extreme) REQUIRE(r.points.row(t).size() == 1);
        alive.insert(op.key);
      } else if (op.kind == D) {
        alive.erase(op.key);
      }
    }
  }
}

TEST_CASE("single access") {
  const auto r = greedy_execute(UpdateSequence(1, {{1, A}}));
  CHECK(r.cost == 1);
}

TEST_CASE("non-extreme delete picks the smaller neighbor union") {
  const UpdateSequence s(4, {{2, I}, {4, I}, {1, I}, {3, I}, {2, D}});
  const auto r = greedy_execute(s);
  CHECK(oracle::cells_of(r.points) == oracle::greedy(s));
  const auto row = r.points.row(5);
  const bool has_neighbor = std::any_of(row.begin(), row.end(), [](const Point& q) { return q.x == 1 || q.x == 3; });
  CHECK(has_neighbor);
  CHECK(oracle::satisfied(r.points, 5));
}

TEST_CASE("GREEDY matches the definitional construction") {
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    const auto s = random_update_sequence(8, 14, seed);
    REQUIRE(oracle::cells_of(greedy_execute(s).points) == oracle::greedy(s));
  }
}

TEST_CASE("output is satisfied and every row is minimal") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto s = random_update_sequence(8, 12, seed);
    const PointSet p = greedy_execute(s).points;
    REQUIRE(is_satisfied(p));
    REQUIRE(oracle::satisfied(p));
    for (Time t = 1; t <= s.length(); ++t) {
      // Drop any nonempty subset of the row's touched points; rows <= t must
      // become unsatisfied.
      std::vector<Cell> extra;
      for (const Point& q : p.row(t)) {
        if (!q.in_input()) extra.push_back(q.cell());
      }
      REQUIRE(extra.size() < 12);
      for (std::uint32_t mask = 1; mask < (1u << extra.size()); ++mask) {
        std::vector<Cell> keep;
        for (const Point& q : p.points()) {
          if (q.in_input() || q.t > t) continue;
          bool dropped = false;
          for (std::size_t i = 0; i < extra.size(); ++i) {
            if ((mask >> i & 1u) && extra[i] == q.cell()) dropped = true;
          }
          if (!dropped) keep.push_back(q.cell());
        }
        REQUIRE_FALSE(oracle::satisfied(PointSet(s, keep), t));
      }
    }
  }
}

TEST_CASE("access-only runs agree with classic GREEDY") {
  MixOptions only_access{1.0, 0.0, 0.0, 1.0};
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto s = random_update_sequence(12, 40, seed, only_access);
    REQUIRE(oracle::cells_of(greedy_execute(s).points) == classic_greedy(s));
  }
}

TEST_CASE("greedy_step depends only on earlier rows") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto s = random_update_sequence(9, 20, seed);
    const PointSet full = greedy_execute(s).points;
    for (Time t = 1; t <= s.length(); ++t) {
      const auto step = greedy_step(PointSet(s, rows_below(full, t)), s.op(t), t);
      const auto row = full.row(t);
      REQUIRE(step == std::vector<Point>(row.begin(), row.end()));
      // Later rows present in the input are ignored.
      REQUIRE(greedy_step(full, s.op(t), t) == step);
    }
  }
}

TEST_CASE("runner replays a committed prefix") {
  const auto s = random_update_sequence(9, 25, 5);
  const PointSet full = greedy_execute(s).points;
  GreedyRunner runner(s);
  for (Time t = 1; t <= 10; ++t) {
    std::vector<Key> keys;
    for (const Point& q : full.row(t)) keys.push_back(q.x);
    runner.commit(keys);
  }
  while (!runner.done()) {
    const Time t = runner.next_row();
    std::vector<Key> expect;
    for (const Point& q : full.row(t)) expect.push_back(q.x);
    REQUIRE(runner.step() == expect);
  }
  CHECK(runner.next_row() == s.length() + 1);
}

TEST_CASE("greedy_step rejects mismatched input") {
  const UpdateSequence s(2, {{1, A}, {2, A}});
  const PointSet p(s);
  CHECK_THROWS_AS(greedy_step(p, {2, A}, 1), SequenceError);
  CHECK_THROWS_AS(greedy_step(p, {1, A}, 3), RangeError);
}

TEST_CASE("random permutations agree with classic GREEDY") {
  for (Key n : {64, 128, 256}) {
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      const auto s = random_permutation_access(n, seed);
      const GreedyResult g = greedy_execute(s);
      REQUIRE(oracle::cells_of(g.points) == classic_greedy(s));
      REQUIRE(g.cost == static_cast<std::int64_t>(classic_greedy(s).size()));
    }
  }
}
