#pragma once

// 0/1 matrices, forbidden-submatrix containment and the extremal bounds for
// the two patterns that show up in deque executions.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geobst/model.hpp"

namespace geobst {

struct Entry {
  std::int32_t r = 0;
  std::int32_t c = 0;

  friend bool operator==(const Entry&, const Entry&) = default;
  friend auto operator<=>(const Entry&, const Entry&) = default;
};

/// Sparse u x v binary matrix, 1-based, immutable.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  /// Duplicates are merged; throws RangeError for entries outside the grid.
  BinaryMatrix(std::int32_t rows, std::int32_t cols, std::vector<Entry> ones);

  std::int32_t rows() const { return rows_; }
  std::int32_t cols() const { return cols_; }
  std::size_t count() const { return ones_.size(); }
  /// Row-major order.
  std::span<const Entry> ones() const { return ones_; }
  /// Columns of the ones of row r, ascending.
  std::vector<std::int32_t> row(std::int32_t r) const;
  bool at(std::int32_t r, std::int32_t c) const;

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  std::int32_t rows_ = 0;
  std::int32_t cols_ = 0;
  std::vector<Entry> ones_;
  std::vector<std::size_t> row_offset_;
};

struct Pattern {
  std::string name;
  BinaryMatrix matrix;
};

/// 2 x 5, ones at (1,1) (2,2) (1,3) (2,4) (1,5).
const Pattern& p5();
/// 4 x 4, ones at (1,1) (2,3) (3,2) (4,4).
const Pattern& p4();

/// Row r becomes row rows() + 1 - r.
BinaryMatrix flip_rows(const BinaryMatrix& m);
Pattern flip_rows(const Pattern& p);

/// horizon x universe matrix with time running upward: timestep t is row
/// horizon + 1 - t, key x is column x.
BinaryMatrix matrix_from_pointset(const PointSet& p);

struct PatternMatch {
  bool found = false;
  /// Host rows and columns matched to the pattern's rows and columns.
  std::vector<std::int32_t> rows;
  std::vector<std::int32_t> cols;

  explicit operator bool() const { return found; }
};

/// Whether m has a submatrix (rows and columns kept in order) with a one at
/// every one of p. P4, P5 and their row flips use O(N log N) sweeps;
/// anything else uses a backtracking search over row choices.
PatternMatch contains_pattern(const BinaryMatrix& m, const Pattern& p);
/// The backtracking search, regardless of the pattern.
PatternMatch contains_pattern_search(const BinaryMatrix& m, const BinaryMatrix& p);

/// A_1(j) = 2j, A_i(1) = A_{i-1}(2), A_i(j) = A_{i-1}(A_i(j-1)); saturates
/// at 2^62.
std::uint64_t ackermann(int i, std::uint64_t j);
/// min{ i >= 1 : A_i(ceil(v/u)) > log2 u }.
int inverse_ackermann(std::int64_t u, std::int64_t v);

enum class BoundKind { P4Linear, P5Quasilinear };

struct BoundReport {
  BoundKind kind = BoundKind::P4Linear;
  std::int64_t ones = 0;
  std::int64_t u = 0;
  std::int64_t v = 0;
  int alpha = 0;
  /// 12(u+v) for P4; u * 2^alpha + v for P5.
  double bound = 0;
  double ratio = 0;
  /// Only the P4 bound is absolute; for P5 `pass` is always true.
  bool absolute = true;
  bool pass = true;
};

BoundReport bound_report(const BinaryMatrix& m, BoundKind which);

}  // namespace geobst
