#include "dtcv/stabilize.hpp"

#include <string>

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::int64_t rounded_mean(std::int64_t sum, int m) {
  return floor_div(2 * sum + m, 2 * static_cast<std::int64_t>(m));
}

std::int64_t StabilizedSeries::at(std::size_t t) const {
  if (t < first() || t >= original.size())
    throw Error("stabilized value undefined at index " + std::to_string(t));
  return values[t - first()];
}

StabilizedSeries stabilize(std::span<const std::int64_t> series, int m) {
  if (m < 1) throw Error("window must be at least 1");
  if (static_cast<std::size_t>(m) >= series.size()) throw Error("window exceeds series");
  StabilizedSeries out;
  out.original.assign(series.begin(), series.end());
  out.m = m;
  out.values.reserve(series.size() - static_cast<std::size_t>(m));
  std::int64_t sum = 0;
  for (int i = 0; i < m; ++i) sum += series[static_cast<std::size_t>(i)];
  for (std::size_t t = static_cast<std::size_t>(m); t < series.size(); ++t) {
    out.values.push_back(rounded_mean(sum, m));
    sum += series[t] - series[t - static_cast<std::size_t>(m)];
  }
  return out;
}

bool componentwise_leq(std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
  if (x.size() != y.size())
    throw Error("componentwise comparison of vectors with lengths " + std::to_string(x.size()) +
                " and " + std::to_string(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > y[i]) return false;
  return true;
}

}  // namespace dtcv
