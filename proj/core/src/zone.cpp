#include "dtcv/zone.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace dtcv {

std::string Bound::to_string() const {
  if (is_infinite()) return "<inf";
  return (is_strict() ? "<" : "<=") + std::to_string(value());
}

Zone::Zone(std::size_t dim) : dim_(dim), cells_(dim * dim, Bound::infinity()) {
  for (std::size_t i = 0; i < dim; ++i) cells_[i * dim + i] = Bound::zero();
}

Zone Zone::universe(std::size_t dim) {
  Zone z(dim);
  for (std::size_t j = 0; j < dim; ++j) z.cells_[j] = Bound::zero();
  return z;
}

Zone Zone::zero(std::size_t dim) {
  Zone z(dim);
  for (auto& c : z.cells_) c = Bound::zero();
  return z;
}

Zone Zone::empty_zone(std::size_t dim) {
  Zone z = zero(dim);
  z.empty_ = true;
  return z;
}

Zone& Zone::canonicalize() {
  if (empty_) return *this;
  const std::size_t n = dim_;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Bound dik = cells_[i * n + k];
      if (dik.is_infinite()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Bound via = dik + cells_[k * n + j];
        if (via < cells_[i * n + j]) cells_[i * n + j] = via;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (cells_[i * n + i] < Bound::zero()) {
        empty_ = true;
        canonical_ = true;
        return *this;
      }
    }
  }
  canonical_ = true;
  return *this;
}

Zone& Zone::delay() {
  if (empty_) return *this;
  for (std::size_t i = 1; i < dim_; ++i) cells_[i * dim_] = Bound::infinity();
  return *this;
}

Zone& Zone::constrain(const ClockConstraint& c) {
  if (empty_) return *this;
  if (!canonical_) canonicalize();
  if (empty_) return *this;
  const std::size_t n = dim_;
  const std::size_t i = c.i, j = c.j;
  assert(i < n && j < n);
  if (!(c.bound < cells_[i * n + j])) return *this;
  if (cells_[j * n + i] + c.bound < Bound::zero()) {
    empty_ = true;
    return *this;
  }
  cells_[i * n + j] = c.bound;
  // Incremental closure through the tightened edge i -> j.
  for (std::size_t a = 0; a < n; ++a) {
    const Bound ai = cells_[a * n + i];
    if (ai.is_infinite()) continue;
    const Bound aij = ai + c.bound;
    for (std::size_t b = 0; b < n; ++b) {
      const Bound via = aij + cells_[j * n + b];
      if (via < cells_[a * n + b]) cells_[a * n + b] = via;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (cells_[a * n + a] < Bound::zero()) {
      empty_ = true;
      break;
    }
  }
  return *this;
}

Zone& Zone::reset(ClockId x) {
  if (empty_) return *this;
  if (!canonical_) canonicalize();
  if (empty_) return *this;
  const std::size_t n = dim_;
  assert(x > 0 && x < n);
  for (std::size_t j = 0; j < n; ++j) {
    cells_[x * n + j] = cells_[j];
    cells_[j * n + x] = cells_[j * n];
  }
  cells_[x * n + x] = Bound::zero();
  return *this;
}

Zone& Zone::extrapolate(std::span<const std::int64_t> max_const) {
  if (empty_) return *this;
  const std::size_t n = dim_;
  assert(max_const.size() == n);
  bool changed = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t mi = i == 0 ? 0 : max_const[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::int64_t mj = j == 0 ? 0 : max_const[j];
      Bound& d = cells_[i * n + j];
      if (d.is_infinite()) continue;
      if (i != 0 && mi >= 0 && d > Bound::le(static_cast<std::int32_t>(mi))) {
        d = Bound::infinity();
        changed = true;
      } else if (j != 0 && mj >= 0 && d < Bound::lt(static_cast<std::int32_t>(-mj))) {
        d = Bound::lt(static_cast<std::int32_t>(-mj));
        changed = true;
      }
    }
  }
  if (changed) canonicalize();
  return *this;
}

bool Zone::is_subset_of(const Zone& other) const {
  if (dim_ != other.dim_) return false;
  if (empty_) return true;
  if (other.empty_) return false;
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (other.cells_[k] < cells_[k]) return false;
  return true;
}

bool Zone::contains(std::span<const double> point) const {
  if (empty_) return false;
  assert(point.size() + 1 == dim_);
  auto value = [&](std::size_t i) { return i == 0 ? 0.0 : point[i - 1]; };
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const Bound b = at(i, j);
      if (b.is_infinite()) continue;
      const double diff = value(i) - value(j);
      if (b.is_strict() ? !(diff < b.value()) : !(diff <= b.value())) return false;
    }
  }
  return true;
}

std::size_t Zone::hash() const {
  std::size_t h = std::hash<std::size_t>{}(dim_) ^ (empty_ ? 0x9e3779b97f4a7c15ULL : 0);
  if (empty_) return h;
  for (const Bound b : cells_)
    h ^= std::hash<std::int32_t>{}(b.raw()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

bool Zone::operator==(const Zone& other) const {
  if (dim_ != other.dim_) return false;
  if (empty_ || other.empty_) return empty_ == other.empty_;
  return cells_ == other.cells_;
}

namespace {

std::string format_pair(const std::string& lhs, Bound upper, Bound lower_neg) {
  // upper: lhs <|<= upper ; lower_neg: -lhs <|<= lower_neg
  std::ostringstream out;
  const bool has_upper = !upper.is_infinite();
  const bool has_lower = !lower_neg.is_infinite();
  if (has_upper && has_lower && !upper.is_strict() && !lower_neg.is_strict() &&
      upper.value() == -lower_neg.value()) {
    out << lhs << "==" << upper.value();
    return out.str();
  }
  bool first = true;
  if (has_lower) {
    out << lhs << (lower_neg.is_strict() ? ">" : ">=") << -lower_neg.value();
    first = false;
  }
  if (has_upper) {
    if (!first) out << ", ";
    out << lhs << (upper.is_strict() ? "<" : "<=") << upper.value();
  }
  return out.str();
}

}  // namespace

std::string Zone::to_string(const std::function<std::string(ClockId)>& name) const {
  if (empty_) return "false";
  std::vector<std::string> parts;
  for (std::size_t i = 1; i < dim_; ++i) {
    const std::string s = format_pair(name(static_cast<ClockId>(i)), at(i, 0), at(0, i));
    if (!s.empty()) parts.push_back(s);
  }
  for (std::size_t i = 1; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const std::string s = format_pair(name(static_cast<ClockId>(i)) + "-" +
                                            name(static_cast<ClockId>(j)),
                                        at(i, j), at(j, i));
      if (!s.empty()) parts.push_back(s);
    }
  }
  if (parts.empty()) return "true";
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += ", ";
    out += parts[k];
  }
  return out;
}

std::string Zone::to_string() const {
  return to_string([](ClockId id) { return "x" + std::to_string(id); });
}

Zone zone_canonical(Zone z) { return std::move(z.canonicalize()); }

Zone zone_delay(Zone z) { return std::move(z.delay()); }

Zone zone_constrain(Zone z, const ClockConstraint& c) { return std::move(z.constrain(c)); }

Zone zone_reset(Zone z, std::span<const ClockId> clocks) {
  for (const ClockId x : clocks) z.reset(x);
  return z;
}

}  // namespace dtcv
