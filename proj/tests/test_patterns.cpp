#include <doctest.h>

#include <functional>
#include <map>

#include "geobst/greedy.hpp"
#include "geobst/patterns.hpp"
#include "geobst/rng.hpp"
#include "geobst/sequences.hpp"
#include "oracles.hpp"

using namespace geobst;

namespace {

BinaryMatrix random_matrix(Rng& rng, std::int32_t max_side, double density) {
  const auto r = static_cast<std::int32_t>(rng.between(1, max_side));
  const auto c = static_cast<std::int32_t>(rng.between(1, max_side));
  std::vector<Entry> ones;
  for (std::int32_t i = 1; i <= r; ++i) {
    for (std::int32_t j = 1; j <= c; ++j) {
      if (rng.chance(density)) ones.push_back({i, j});
    }
  }
  return BinaryMatrix(r, c, ones);
}

bool match_is_sound(const BinaryMatrix& m, const BinaryMatrix& p, const PatternMatch& hit) {
  if (hit.rows.size() != static_cast<std::size_t>(p.rows()) || hit.cols.size() != static_cast<std::size_t>(p.cols())) {
    return false;
  }
  for (std::size_t i = 1; i < hit.rows.size(); ++i) {
    if (hit.rows[i] <= hit.rows[i - 1]) return false;
  }
  for (std::size_t i = 1; i < hit.cols.size(); ++i) {
    if (hit.cols[i] <= hit.cols[i - 1]) return false;
  }
  for (const Entry& e : p.ones()) {
    if (!m.at(hit.rows[static_cast<std::size_t>(e.r - 1)], hit.cols[static_cast<std::size_t>(e.c - 1)])) return false;
  }
  return true;
}

// Textbook recursion with memo, capped like the library.
std::uint64_t ackermann_ref(int i, std::uint64_t j) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  static std::map<std::pair<int, std::uint64_t>, std::uint64_t> memo;
  if (j >= cap) return cap;
  if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
  std::uint64_t v;
  if (i == 1) {
    v = std::min(cap, 2 * j);
  } else if (j == 1) {
    v = ackermann_ref(i - 1, 2);
  } else {
    v = ackermann_ref(i - 1, ackermann_ref(i, j - 1));
  }
  memo[{i, j}] = v;
  return v;
}

}  // namespace

TEST_CASE("pattern shapes") {
  const BinaryMatrix& a = p4().matrix;
  CHECK(a.rows() == 4);
  CHECK(a.cols() == 4);
  CHECK(a.count() == 4);
  CHECK(a.at(1, 1));
  CHECK(a.at(2, 3));
  CHECK(a.at(3, 2));
  CHECK(a.at(4, 4));
  const BinaryMatrix& b = p5().matrix;
  CHECK(b.rows() == 2);
  CHECK(b.cols() == 5);
  CHECK(b.row(1) == std::vector<std::int32_t>{1, 3, 5});
  CHECK(b.row(2) == std::vector<std::int32_t>{2, 4});
  CHECK(flip_rows(flip_rows(a)) == a);
  CHECK(flip_rows(b).row(1) == std::vector<std::int32_t>{2, 4});
}

TEST_CASE("matrix construction") {
  const BinaryMatrix m(3, 3, {{2, 2}, {1, 3}, {2, 2}});
  CHECK(m.count() == 2);
  CHECK(m.ones()[0] == Entry{1, 3});
  CHECK_FALSE(m.at(3, 3));
  CHECK_THROWS_AS(BinaryMatrix(2, 2, {{3, 1}}), RangeError);
}

TEST_CASE("time runs upward in the matrix of a point set") {
  const UpdateSequence s(3, {{1, OpKind::Access}, {3, OpKind::Access}});
  const BinaryMatrix m = matrix_from_pointset(PointSet(s));
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.at(2, 1));
  CHECK(m.at(1, 3));
}

TEST_CASE("the pattern itself and its flip") {
  for (const Pattern* p : {&p4(), &p5()}) {
    CHECK(contains_pattern(p->matrix, *p));
    const Pattern f = flip_rows(*p);
    CHECK(contains_pattern(f.matrix, f));
    CHECK_FALSE(contains_pattern(f.matrix, *p));
  }
}

TEST_CASE("containment agrees with exhaustive search") {
  const std::vector<Pattern> pats{p4(), p5(), flip_rows(p4()), flip_rows(p5())};
  Rng rng(99);
  std::map<std::string, std::pair<int, int>> tally;
  for (int iter = 0; iter < 4000; ++iter) {
    const BinaryMatrix m = random_matrix(rng, 8, 0.15 + 0.5 * rng.unit());
    for (const Pattern& p : pats) {
      const PatternMatch hit = contains_pattern(m, p);
      const bool want = oracle::contains(m, p.matrix);
      REQUIRE(hit.found == want);
      if (hit) REQUIRE(match_is_sound(m, p.matrix, hit));
      (want ? tally[p.name].first : tally[p.name].second) += 1;
    }
  }
  for (const auto& [name, counts] : tally) {
    CAPTURE(name);
    CHECK(counts.first > 200);
    CHECK(counts.second > 200);
  }
}

TEST_CASE("general search agrees with exhaustive search on random patterns") {
  Rng rng(5);
  for (int iter = 0; iter < 3000; ++iter) {
    const BinaryMatrix m = random_matrix(rng, 7, 0.2 + 0.5 * rng.unit());
    const BinaryMatrix p = random_matrix(rng, 3, 0.5);
    const PatternMatch hit = contains_pattern_search(m, p);
    REQUIRE(hit.found == oracle::contains(m, p));
    if (hit) REQUIRE(match_is_sound(m, p, hit));
  }
}

TEST_CASE("restricted deque runs avoid P4 and general ones avoid P5") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto r = concentrate(gen_deque(10, 16, seed, true));
    const BinaryMatrix mr = matrix_from_pointset(greedy_execute(r).points);
    REQUIRE_FALSE(oracle::contains(mr, p4().matrix));
    REQUIRE_FALSE(contains_pattern(mr, p4()));

    const auto g = concentrate(gen_deque(10, 30, seed, false));
    const BinaryMatrix mg = matrix_from_pointset(greedy_execute(g).points);
    REQUIRE_FALSE(oracle::contains(mg, p5().matrix));
    REQUIRE_FALSE(contains_pattern(mg, p5()));
  }
}

TEST_CASE("Ackermann hierarchy") {
  CHECK(ackermann(1, 5) == 10);
  CHECK(ackermann(2, 1) == 4);
  CHECK(ackermann(2, 3) == 16);
  CHECK(ackermann(3, 1) == 8);
  CHECK(ackermann(3, 2) == 512);
  for (int i = 1; i <= 4; ++i) {
    for (std::uint64_t j = 1; j <= 6; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      REQUIRE(ackermann(i, j) == ackermann_ref(i, j));
    }
  }
  CHECK(ackermann(4, 2) == std::uint64_t{1} << 62);
  CHECK_THROWS_AS(ackermann(0, 1), RangeError);
}

TEST_CASE("inverse Ackermann stays tiny and does not grow with v") {
  CHECK(inverse_ackermann(1, 1) == 1);
  CHECK(inverse_ackermann(1000, 1100) == 3);
  CHECK(inverse_ackermann(1000000, 1100000) == 3);
  for (std::int64_t u : {1LL, 2LL, 10LL, 1000LL, 123456LL, 1000000000LL}) {
    int prev = 100;
    for (std::int64_t v = 1; v <= 1000000000LL; v = v * 3 + 1) {
      const int a = inverse_ackermann(u, v);
      REQUIRE(a >= 1);
      REQUIRE(a <= 4);
      REQUIRE(a <= prev);
      prev = a;
    }
  }
  CHECK_THROWS_AS(inverse_ackermann(0, 5), RangeError);
}

TEST_CASE("bound reports") {
  const BinaryMatrix m(10, 5, {{1, 1}, {2, 2}, {3, 3}});
  const BoundReport a = bound_report(m, BoundKind::P4Linear);
  CHECK(a.bound == 180.0);
  CHECK(a.ratio == doctest::Approx(3.0 / 180.0));
  CHECK(a.pass);
  CHECK(a.absolute);
  const BoundReport b = bound_report(m, BoundKind::P5Quasilinear);
  CHECK(b.alpha == inverse_ackermann(10, 5));
  CHECK(b.bound == 10.0 * (1 << b.alpha) + 5.0);
  CHECK_FALSE(b.absolute);
}

TEST_CASE("with time running downward the deque runs do contain the patterns") {
  // Evidence for the orientation: the flipped patterns show up.
  int p5_hits = 0;
  int p4_hits = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto g = concentrate(gen_deque(50, 400, seed, false));
    p5_hits += contains_pattern(matrix_from_pointset(greedy_execute(g).points), flip_rows(p5())).found;
    const auto r = concentrate(gen_deque(50, 400, seed, true));
    p4_hits += contains_pattern(matrix_from_pointset(greedy_execute(r).points), flip_rows(p4())).found;
  }
  CHECK(p5_hits == 40);
  CHECK(p4_hits == 40);
}
