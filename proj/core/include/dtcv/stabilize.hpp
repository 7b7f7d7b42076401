#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dtcv {

/// Moving average over the m values strictly before each index.
struct StabilizedSeries {
  std::vector<std::int64_t> original;
  int m = 1;
  /// values[k] is the stabilized value at index m + k.
  std::vector<std::int64_t> values;

  /// Defined for t in [m, original.size()).
  std::int64_t at(std::size_t t) const;
  std::size_t first() const { return static_cast<std::size_t>(m); }
};

/// floor((2*sum + m) / (2*m)): the mean rounded half up, exact on scaled integers.
std::int64_t rounded_mean(std::int64_t sum, int m);

/// Throws Error("window exceeds series") when m >= series.size().
StabilizedSeries stabilize(std::span<const std::int64_t> series, int m);

/// Throws Error on length mismatch.
bool componentwise_leq(std::span<const std::int64_t> x, std::span<const std::int64_t> y);

}  // namespace dtcv
