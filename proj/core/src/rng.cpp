#include "geobst/rng.hpp"

#include "geobst/errors.hpp"

namespace geobst {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw RangeError("Rng::below needs a positive bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r = next();
  while (r >= limit) r = next();
  return r % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw RangeError("Rng::between with empty range");
  const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  return lo + static_cast<std::int64_t>(below(span));
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace geobst
