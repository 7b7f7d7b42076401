#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace dtcv {

using ClockId = std::uint32_t;

/// Upper bound `(value, strictness)` on a clock difference, packed as
/// `2 * value + (non-strict ? 1 : 0)` so that bounds order by tightness.
class Bound {
 public:
  constexpr Bound() = default;

  static constexpr Bound le(std::int32_t v) { return Bound(v * 2 + 1); }
  static constexpr Bound lt(std::int32_t v) { return Bound(v * 2); }
  static constexpr Bound infinity() { return Bound(kInfRaw); }
  static constexpr Bound zero() { return le(0); }
  static constexpr Bound from_raw(std::int32_t raw) { return Bound(raw); }

  constexpr std::int32_t raw() const { return raw_; }
  constexpr bool is_infinite() const { return raw_ == kInfRaw; }
  constexpr bool is_strict() const { return (raw_ & 1) == 0; }
  constexpr std::int32_t value() const { return raw_ >> 1; }

  /// Bound on the sum of two differences; strict unless both are non-strict.
  constexpr Bound operator+(Bound other) const {
    if (is_infinite() || other.is_infinite()) return infinity();
    return Bound(raw_ + other.raw_ - ((raw_ | other.raw_) & 1));
  }
  /// Negation used for the complement of a constraint: !(x - y <= c) is y - x < -c.
  constexpr Bound complement() const { return Bound(1 - raw_); }

  constexpr auto operator<=>(const Bound&) const = default;

  std::string to_string() const;

  static constexpr std::int32_t kInfRaw = std::numeric_limits<std::int32_t>::max();

 private:
  constexpr explicit Bound(std::int32_t raw) : raw_(raw) {}
  std::int32_t raw_ = kInfRaw;
};

/// Atomic difference constraint `x_i - x_j (< | <=) c`. Clock 0 is the reference clock.
struct ClockConstraint {
  ClockId i = 0;
  ClockId j = 0;
  Bound bound;

  friend bool operator==(const ClockConstraint&, const ClockConstraint&) = default;
};

/// Difference-bound matrix over `dim` clocks, including the reference clock 0.
///
/// All mutating operations keep the matrix in canonical (shortest-path closed)
/// form except set(), which clears the canonical flag until canonicalize() is called.
/// An inconsistent zone is represented by the empty flag, never by an exception.
class Zone {
 public:
  Zone() = default;

  /// Non-negative orthant: every clock >= 0, no upper bounds.
  static Zone universe(std::size_t dim);
  /// The single valuation where every clock is 0.
  static Zone zero(std::size_t dim);
  static Zone empty_zone(std::size_t dim);

  std::size_t dim() const { return dim_; }
  bool is_empty() const { return empty_; }
  bool is_canonical() const { return canonical_; }

  Bound at(std::size_t i, std::size_t j) const { return cells_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, Bound b) {
    cells_[i * dim_ + j] = b;
    canonical_ = false;
  }

  Zone& canonicalize();
  Zone& delay();
  Zone& constrain(const ClockConstraint& c);
  Zone& constrain(ClockId i, ClockId j, Bound b) { return constrain(ClockConstraint{i, j, b}); }
  Zone& reset(ClockId x);
  /// Classic maximal-constant abstraction. `max_const[x] < 0` disables it for clock x.
  Zone& extrapolate(std::span<const std::int64_t> max_const);

  bool is_subset_of(const Zone& other) const;
  bool contains(std::span<const double> point) const;

  std::size_t hash() const;
  bool operator==(const Zone& other) const;

  /// Human-readable conjunction such as `y>=0, c-y==0`.
  std::string to_string(const std::function<std::string(ClockId)>& name) const;
  std::string to_string() const;

 private:
  explicit Zone(std::size_t dim);

  std::size_t dim_ = 0;
  bool empty_ = false;
  bool canonical_ = true;
  std::vector<Bound> cells_;
};

Zone zone_canonical(Zone z);
Zone zone_delay(Zone z);
Zone zone_constrain(Zone z, const ClockConstraint& c);
Zone zone_reset(Zone z, std::span<const ClockId> clocks);

}  // namespace dtcv
