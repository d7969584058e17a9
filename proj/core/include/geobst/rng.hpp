#pragma once

// Seeded generator used by every workload. The engine is std::mt19937_64,
// whose output sequence is fixed by the standard; the bounded draws below
// use rejection sampling instead of std::uniform_int_distribution, whose
// algorithm varies between standard libraries.

#include <cstdint>
#include <random>
#include <utility>

namespace geobst {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1) with 53 random bits.
  double unit();
  bool chance(double p) { return unit() < p; }

  /// Fisher-Yates over any random-access container.
  template <class Container>
  void shuffle(Container& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace geobst
