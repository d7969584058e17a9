#include "geobst/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace geobst {

BinaryMatrix::BinaryMatrix(std::int32_t rows, std::int32_t cols, std::vector<Entry> ones)
    : rows_(rows), cols_(cols), ones_(std::move(ones)) {
  if (rows < 0 || cols < 0) throw RangeError("negative matrix size");
  for (const Entry& e : ones_) {
    if (e.r < 1 || e.r > rows || e.c < 1 || e.c > cols) {
      throw RangeError("entry (" + std::to_string(e.r) + "," + std::to_string(e.c) + ") outside " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::sort(ones_.begin(), ones_.end());
  ones_.erase(std::unique(ones_.begin(), ones_.end()), ones_.end());
  row_offset_.assign(static_cast<std::size_t>(rows) + 2, 0);
  for (const Entry& e : ones_) ++row_offset_[static_cast<std::size_t>(e.r) + 1];
  for (std::size_t r = 1; r < row_offset_.size(); ++r) row_offset_[r] += row_offset_[r - 1];
}

std::vector<std::int32_t> BinaryMatrix::row(std::int32_t r) const {
  std::vector<std::int32_t> out;
  if (r < 1 || r > rows_) return out;
  for (auto i = row_offset_[static_cast<std::size_t>(r)]; i < row_offset_[static_cast<std::size_t>(r) + 1]; ++i) {
    out.push_back(ones_[i].c);
  }
  return out;
}

bool BinaryMatrix::at(std::int32_t r, std::int32_t c) const {
  if (r < 1 || r > rows_) return false;
  auto b = ones_.begin() + static_cast<std::ptrdiff_t>(row_offset_[static_cast<std::size_t>(r)]);
  auto e = ones_.begin() + static_cast<std::ptrdiff_t>(row_offset_[static_cast<std::size_t>(r) + 1]);
  return std::binary_search(b, e, Entry{r, c});
}

const Pattern& p5() {
  static const Pattern p{"P5", BinaryMatrix(2, 5, {{1, 1}, {2, 2}, {1, 3}, {2, 4}, {1, 5}})};
  return p;
}

const Pattern& p4() {
  static const Pattern p{"P4", BinaryMatrix(4, 4, {{1, 1}, {2, 3}, {3, 2}, {4, 4}})};
  return p;
}

BinaryMatrix flip_rows(const BinaryMatrix& m) {
  std::vector<Entry> ones;
  ones.reserve(m.count());
  for (const Entry& e : m.ones()) ones.push_back({m.rows() + 1 - e.r, e.c});
  return BinaryMatrix(m.rows(), m.cols(), std::move(ones));
}

Pattern flip_rows(const Pattern& p) { return {p.name + "-flipped", flip_rows(p.matrix)}; }

BinaryMatrix matrix_from_pointset(const PointSet& p) {
  std::vector<Entry> ones;
  ones.reserve(p.size());
  for (const Point& q : p.points()) ones.push_back({p.horizon() + 1 - q.t, q.x});
  return BinaryMatrix(p.horizon(), p.universe(), std::move(ones));
}

namespace {

using Rows = std::vector<std::vector<std::int32_t>>;

Rows rows_of(const BinaryMatrix& m) {
  Rows rows(static_cast<std::size_t>(m.rows()) + 1);
  for (const Entry& e : m.ones()) rows[static_cast<std::size_t>(e.r)].push_back(e.c);
  return rows;
}

// P5: rows r1 < r2 with r1 holding c1, c3, c5 and r2 holding c2, c4. The
// best c2, c4 are the nearest ones of r2 around c3: consecutive in r2, or one
// apart when c3 is itself a column of r2. For each such pair (g, h) the
// question is whether an earlier row has an interior one in (g, h), its
// leftmost one left of g and its rightmost one right of h. A segment tree over columns
// keeps, per node, the staircase of (leftmost, rightmost) pairs that are not
// dominated by another with smaller leftmost and larger rightmost.
PatternMatch find_p5(const BinaryMatrix& m) {
  struct Source {
    std::int32_t hi, col, row;
  };
  const Rows rows = rows_of(m);
  std::int32_t size = 1;
  while (size < m.cols() + 2) size <<= 1;
  std::vector<std::map<std::int32_t, Source>> node(2 * static_cast<std::size_t>(size));

  auto insert_at = [](std::map<std::int32_t, Source>& stair, std::int32_t lo, const Source& s) {
    auto it = stair.upper_bound(lo);
    if (it != stair.begin() && std::prev(it)->second.hi >= s.hi) return;
    it = stair.insert_or_assign(lo, s).first;
    auto next = std::next(it);
    while (next != stair.end() && next->second.hi <= s.hi) next = stair.erase(next);
  };
  auto probe = [](const std::map<std::int32_t, Source>& stair, std::int32_t g,
                  std::int32_t h) -> std::optional<std::pair<std::int32_t, Source>> {
    auto it = stair.lower_bound(g);
    if (it == stair.begin()) return std::nullopt;
    --it;
    if (it->second.hi > h) return *it;
    return std::nullopt;
  };

  for (std::int32_t r2 = 1; r2 <= m.rows(); ++r2) {
    const auto& cols = rows[static_cast<std::size_t>(r2)];
    for (std::size_t k = 0; k + 1 < 2 * cols.size(); ++k) {
      const std::size_t i = k / 2;
      const std::size_t j = i + 1 + k % 2;
      if (j >= cols.size()) continue;
      const std::int32_t g = cols[i];
      const std::int32_t h = cols[j];
      if (h - g < 2) continue;
      // Iterative range query over leaves (g, h) exclusive.
      auto lo = static_cast<std::size_t>(g + 1 + size);
      auto hi = static_cast<std::size_t>(h - 1 + size) + 1;
      std::optional<std::pair<std::int32_t, Source>> hit;
      while (lo < hi && !hit) {
        if (lo & 1) hit = probe(node[lo++], g, h);
        if (!hit && (hi & 1)) hit = probe(node[--hi], g, h);
        lo >>= 1;
        hi >>= 1;
      }
      if (hit) {
        const auto& [lo_col, src] = *hit;
        return {true, {src.row, r2}, {lo_col, g, src.col, h, src.hi}};
      }
    }
    if (cols.size() >= 3) {
      const std::int32_t lo_col = cols.front();
      const std::int32_t hi_col = cols.back();
      for (std::size_t i = 1; i + 1 < cols.size(); ++i) {
        for (auto n = static_cast<std::size_t>(cols[i] + size); n >= 1; n >>= 1) {
          insert_at(node[n], lo_col, Source{hi_col, cols[i], r2});
        }
      }
    }
  }
  return {};
}

// P4: ones a, b, c, d with rows ra < rb < rc < rd and columns
// ca < cc < cb < cd. For each b the best a is the leftmost one above row rb
// and the best d the lowest row right of column cb; a column sweep then asks
// for the rightmost already-swept one with row in (rb, D(b)).
PatternMatch find_p4(const BinaryMatrix& m) {
  const std::int32_t u = m.rows();
  const std::int32_t v = m.cols();
  if (m.count() < 4) return {};
  constexpr std::int32_t kNone = std::numeric_limits<std::int32_t>::max();

  // left_before[r]: leftmost one among rows < r, with its row.
  std::vector<Entry> left_before(static_cast<std::size_t>(u) + 2, Entry{0, kNone});
  {
    Entry best{0, kNone};
    std::size_t i = 0;
    const auto ones = m.ones();
    for (std::int32_t r = 1; r <= u + 1; ++r) {
      left_before[static_cast<std::size_t>(r)] = best;
      for (; i < ones.size() && ones[i].r == r; ++i) {
        if (ones[i].c < best.c) best = ones[i];
      }
    }
  }
  std::vector<std::vector<std::int32_t>> by_col(static_cast<std::size_t>(v) + 2);
  for (const Entry& e : m.ones()) by_col[static_cast<std::size_t>(e.c)].push_back(e.r);
  // last_after[c]: one with the largest row among columns > c.
  std::vector<Entry> last_after(static_cast<std::size_t>(v) + 2, Entry{0, 0});
  for (std::int32_t c = v - 1; c >= 0; --c) {
    Entry best = last_after[static_cast<std::size_t>(c) + 1];
    for (std::int32_t r : by_col[static_cast<std::size_t>(c) + 1]) {
      if (r > best.r) best = {r, c + 1};
    }
    last_after[static_cast<std::size_t>(c)] = best;
  }

  // Max column per row over swept ones.
  std::int32_t size = 1;
  while (size < u + 2) size <<= 1;
  std::vector<std::int32_t> best_col(2 * static_cast<std::size_t>(size), 0);
  auto query = [&](std::int32_t a, std::int32_t b) {  // rows in [a, b] -> (col, row)
    Entry best{0, 0};
    auto lo = static_cast<std::size_t>(a + size);
    auto hi = static_cast<std::size_t>(b + size) + 1;
    auto take = [&](std::size_t n) {
      if (best_col[n] <= best.c) return;
      while (n < static_cast<std::size_t>(size)) n = best_col[2 * n + 1] >= best_col[2 * n] ? 2 * n + 1 : 2 * n;
      best = {static_cast<std::int32_t>(n - static_cast<std::size_t>(size)), best_col[n]};
    };
    while (lo < hi) {
      if (lo & 1) take(lo++);
      if (hi & 1) take(--hi);
      lo >>= 1;
      hi >>= 1;
    }
    return best;
  };
  auto set = [&](std::int32_t r, std::int32_t c) {
    auto n = static_cast<std::size_t>(r + size);
    best_col[n] = std::max(best_col[n], c);
    for (n >>= 1; n >= 1; n >>= 1) best_col[n] = std::max(best_col[2 * n], best_col[2 * n + 1]);
  };

  for (std::int32_t cb = 1; cb <= v; ++cb) {
    const Entry d = last_after[static_cast<std::size_t>(cb)];
    for (std::int32_t rb : by_col[static_cast<std::size_t>(cb)]) {
      const Entry a = left_before[static_cast<std::size_t>(rb)];
      if (a.c == kNone || d.r <= rb + 1) continue;
      const Entry c = query(rb + 1, d.r - 1);
      if (c.c > a.c) return {true, {a.r, rb, c.r, d.r}, {a.c, c.c, cb, d.c}};
    }
    for (std::int32_t r : by_col[static_cast<std::size_t>(cb)]) set(r, cb);
  }
  return {};
}

PatternMatch unflip(PatternMatch match, std::int32_t host_rows) {
  for (auto& r : match.rows) r = host_rows + 1 - r;
  std::reverse(match.rows.begin(), match.rows.end());
  return match;
}

}  // namespace

PatternMatch contains_pattern_search(const BinaryMatrix& m, const BinaryMatrix& p) {
  const std::int32_t a = p.rows();
  const std::int32_t b = p.cols();
  if (a > m.rows() || b > m.cols()) return {};
  if (a == 0 || b == 0) return {true, {}, {}};

  const Rows host = rows_of(m);
  // need[j]: pattern rows with a one in pattern column j.
  std::vector<std::vector<std::int32_t>> need(static_cast<std::size_t>(b) + 1);
  std::vector<std::size_t> row_weight(static_cast<std::size_t>(a) + 1, 0);
  for (const Entry& e : p.ones()) {
    need[static_cast<std::size_t>(e.c)].push_back(e.r);
    ++row_weight[static_cast<std::size_t>(e.r)];
  }

  std::vector<std::int32_t> chosen(static_cast<std::size_t>(a) + 1, 0);
  std::vector<std::int32_t> cols(static_cast<std::size_t>(b) + 1, 0);

  // Leftmost column assignment using pattern rows 1..k only.
  auto assign = [&](std::int32_t k) {
    std::int32_t prev = 0;
    for (std::int32_t j = 1; j <= b; ++j) {
      std::optional<std::int32_t> lead;
      for (std::int32_t i : need[static_cast<std::size_t>(j)]) {
        if (i <= k) {
          lead = i;
          break;
        }
      }
      std::int32_t pick = 0;
      if (!lead) {
        pick = prev + 1;
        if (pick > m.cols()) return false;
      } else {
        const auto& lead_row = host[static_cast<std::size_t>(chosen[static_cast<std::size_t>(*lead)])];
        for (auto it = std::upper_bound(lead_row.begin(), lead_row.end(), prev); it != lead_row.end(); ++it) {
          bool ok = true;
          for (std::int32_t i : need[static_cast<std::size_t>(j)]) {
            if (i <= k && !m.at(chosen[static_cast<std::size_t>(i)], *it)) {
              ok = false;
              break;
            }
          }
          if (ok) {
            pick = *it;
            break;
          }
        }
        if (pick == 0) return false;
      }
      cols[static_cast<std::size_t>(j)] = pick;
      prev = pick;
    }
    return true;
  };

  auto search = [&](auto&& self, std::int32_t k, std::int32_t from) -> bool {
    if (k > a) return true;
    for (std::int32_t r = from; r <= m.rows() - (a - k); ++r) {
      if (host[static_cast<std::size_t>(r)].size() < row_weight[static_cast<std::size_t>(k)]) continue;
      chosen[static_cast<std::size_t>(k)] = r;
      if (assign(k) && self(self, k + 1, r + 1)) return true;
    }
    return false;
  };
  if (!search(search, 1, 1)) return {};
  PatternMatch match{true, {}, {}};
  match.rows.assign(chosen.begin() + 1, chosen.end());
  match.cols.assign(cols.begin() + 1, cols.end());
  return match;
}

PatternMatch contains_pattern(const BinaryMatrix& m, const Pattern& p) {
  if (p.matrix.count() == 0) throw ShapeError("pattern " + p.name + " has no ones");
  if (p.matrix == p5().matrix) return find_p5(m);
  if (p.matrix == p4().matrix) return find_p4(m);
  if (p.matrix == flip_rows(p5().matrix)) return unflip(find_p5(flip_rows(m)), m.rows());
  if (p.matrix == flip_rows(p4().matrix)) return unflip(find_p4(flip_rows(m)), m.rows());
  return contains_pattern_search(m, p.matrix);
}

std::uint64_t ackermann(int i, std::uint64_t j) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  if (i < 1 || j < 1) throw RangeError("Ackermann hierarchy takes i, j >= 1");
  if (j >= cap) return cap;
  if (i == 1) return std::min(cap, 2 * j);
  if (i == 2) return j + 1 >= 62 ? cap : std::uint64_t{1} << (j + 1);
  std::uint64_t value = ackermann(i - 1, 2);
  for (std::uint64_t k = 2; k <= j && value < cap; ++k) value = ackermann(i - 1, value);
  return value;
}

int inverse_ackermann(std::int64_t u, std::int64_t v) {
  if (u < 1 || v < 1) throw RangeError("inverse Ackermann takes u, v >= 1");
  const auto j = static_cast<std::uint64_t>((v + u - 1) / u);
  const double log_u = std::log2(static_cast<double>(u));
  for (int i = 1;; ++i) {
    if (static_cast<double>(ackermann(i, j)) > log_u) return i;
  }
}

BoundReport bound_report(const BinaryMatrix& m, BoundKind which) {
  BoundReport r;
  r.kind = which;
  r.ones = static_cast<std::int64_t>(m.count());
  r.u = m.rows();
  r.v = m.cols();
  if (which == BoundKind::P4Linear) {
    r.bound = 12.0 * static_cast<double>(r.u + r.v);
    r.absolute = true;
    r.pass = static_cast<double>(r.ones) < r.bound;
  } else {
    r.alpha = r.u >= 1 && r.v >= 1 ? inverse_ackermann(r.u, r.v) : 1;
    r.bound = static_cast<double>(r.u) * std::ldexp(1.0, r.alpha) + static_cast<double>(r.v);
    r.absolute = false;
    r.pass = true;
  }
  r.ratio = r.bound > 0 ? static_cast<double>(r.ones) / r.bound : 0.0;
  return r;
}

}  // namespace geobst
