#include <gtest/gtest.h>

#include <optional>
#include <random>

#include "dtcv/zone.hpp"

namespace dtcv {
namespace {

TEST(Bound, OrdersByTightness) {
  EXPECT_LT(Bound::lt(3), Bound::le(3));
  EXPECT_LT(Bound::le(3), Bound::lt(4));
  EXPECT_LT(Bound::le(100), Bound::infinity());
  EXPECT_TRUE(Bound::lt(2).is_strict());
  EXPECT_FALSE(Bound::le(2).is_strict());
  EXPECT_EQ(Bound::le(-4).value(), -4);
}

TEST(Bound, SumIsStrictUnlessBothAreNot) {
  EXPECT_EQ(Bound::le(2) + Bound::le(3), Bound::le(5));
  EXPECT_EQ(Bound::le(2) + Bound::lt(3), Bound::lt(5));
  EXPECT_EQ(Bound::lt(-2) + Bound::lt(3), Bound::lt(1));
  EXPECT_TRUE((Bound::le(2) + Bound::infinity()).is_infinite());
}

TEST(Bound, ComplementNegatesConstraint) {
  EXPECT_EQ(Bound::le(3).complement(), Bound::lt(-3));
  EXPECT_EQ(Bound::lt(3).complement(), Bound::le(-3));
}

TEST(Zone, DelayFromZeroKeepsClocksEqual) {
  Zone z = Zone::zero(3);
  z.delay();
  EXPECT_TRUE(z.at(1, 0).is_infinite());
  EXPECT_EQ(z.at(1, 2), Bound::le(0));
  EXPECT_EQ(z.at(2, 1), Bound::le(0));
  z.constrain(1, 0, Bound::le(3));
  EXPECT_EQ(z.at(2, 0), Bound::le(3));
  z.reset(2);
  EXPECT_EQ(z.at(2, 0), Bound::le(0));
  EXPECT_EQ(z.at(1, 2), Bound::le(3));
  EXPECT_EQ(z.at(2, 1), Bound::le(0));
  z.constrain(0, 2, Bound::le(-1));
  EXPECT_TRUE(z.is_empty());
}

TEST(Zone, StrictAndClosedBoundsMeetOnlyWhenClosed) {
  Zone a = Zone::universe(2);
  a.constrain(1, 0, Bound::le(2)).constrain(0, 1, Bound::le(-2));
  EXPECT_FALSE(a.is_empty());
  Zone b = Zone::universe(2);
  b.constrain(1, 0, Bound::lt(2)).constrain(0, 1, Bound::le(-2));
  EXPECT_TRUE(b.is_empty());
}

TEST(Zone, SubsetAndEquality) {
  Zone big = Zone::universe(3);
  Zone small = big;
  small.constrain(1, 2, Bound::le(1));
  EXPECT_TRUE(small.is_subset_of(big));
  EXPECT_FALSE(big.is_subset_of(small));
  EXPECT_TRUE(Zone::empty_zone(3).is_subset_of(small));
  EXPECT_EQ(small, small);
  EXPECT_EQ(small.hash(), Zone(small).hash());
}

TEST(Zone, ExtrapolationDropsBoundsAboveMaxConstant) {
  Zone z = Zone::zero(2);
  z.delay().constrain(0, 1, Bound::le(-10));
  const std::vector<std::int64_t> max{0, 4};
  z.extrapolate(max);
  EXPECT_EQ(z.at(0, 1), Bound::lt(-4));
  EXPECT_TRUE(z.at(1, 0).is_infinite());
}

TEST(Zone, RendersReadably) {
  Zone z = Zone::zero(2);
  z.delay().constrain(1, 0, Bound::le(5));
  EXPECT_EQ(z.to_string([](ClockId c) { return c == 1 ? std::string("x") : std::string("?"); }),
            "x>=0, x<=5");
}

// Independent closure: (value, strict) pairs and a textbook Floyd-Warshall.
struct B {
  std::optional<long> v;  // nullopt is infinity
  bool strict = false;
};

bool tighter(const B& a, const B& b) {
  if (!a.v) return false;
  if (!b.v) return true;
  return *a.v < *b.v || (*a.v == *b.v && a.strict && !b.strict);
}

B add(const B& a, const B& b) {
  if (!a.v || !b.v) return {};
  return {*a.v + *b.v, a.strict || b.strict};
}

struct Oracle {
  std::size_t n;
  std::vector<B> m;
  explicit Oracle(std::size_t n) : n(n), m(n * n) {
    for (std::size_t i = 0; i < n; ++i) {
      m[i * n + i] = {0, false};
      m[0 * n + i] = {0, false};
    }
  }
  void add_constraint(std::size_t i, std::size_t j, B b) {
    if (tighter(b, m[i * n + j])) m[i * n + j] = b;
  }
  bool close() {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const B via = add(m[i * n + k], m[k * n + j]);
          if (tighter(via, m[i * n + j])) m[i * n + j] = via;
        }
    for (std::size_t i = 0; i < n; ++i)
      if (tighter(m[i * n + i], B{0, false})) return false;
    return true;
  }
};

TEST(ZoneProperty, ConstrainMatchesFloydWarshall) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 2000; ++round) {
    const std::size_t dim = 2 + rng() % 3;
    Zone z = Zone::universe(dim);
    Oracle o(dim);
    const int count = 1 + static_cast<int>(rng() % 6);
    for (int c = 0; c < count; ++c) {
      const std::size_t i = rng() % dim, j = rng() % dim;
      if (i == j) continue;
      const int v = static_cast<int>(rng() % 13) - 6;
      const bool strict = rng() % 3 == 0;
      z.constrain(static_cast<ClockId>(i), static_cast<ClockId>(j), strict ? Bound::lt(v) : Bound::le(v));
      o.add_constraint(i, j, {v, strict});
    }
    const bool consistent = o.close();
    ASSERT_EQ(z.is_empty(), !consistent) << "round " << round;
    if (!consistent) continue;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        const B& want = o.m[i * dim + j];
        const Bound got = z.at(i, j);
        if (!want.v) {
          ASSERT_TRUE(got.is_infinite()) << "round " << round;
        } else {
          ASSERT_EQ(got.value(), *want.v) << "round " << round << " cell " << i << "," << j;
          ASSERT_EQ(got.is_strict(), want.strict) << "round " << round;
        }
      }
  }
}

TEST(ZoneProperty, MembershipMatchesConstraints) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 500; ++round) {
    Zone z = Zone::universe(3);
    struct C { std::size_t i, j; int v; bool strict; };
    std::vector<C> cs;
    for (int c = 0; c < 4; ++c) {
      const std::size_t i = rng() % 3, j = rng() % 3;
      if (i == j) continue;
      const int v = static_cast<int>(rng() % 9) - 4;
      const bool strict = rng() % 2;
      cs.push_back({i, j, v, strict});
      z.constrain(static_cast<ClockId>(i), static_cast<ClockId>(j), strict ? Bound::lt(v) : Bound::le(v));
    }
    for (double x = 0; x <= 6; x += 0.5)
      for (double y = 0; y <= 6; y += 0.5) {
        const double p[3] = {0, x, y};
        bool inside = true;
        for (const auto& c : cs) {
          const double d = p[c.i] - p[c.j];
          inside = inside && (c.strict ? d < c.v : d <= c.v);
        }
        ASSERT_EQ(z.contains(std::span<const double>(p + 1, 2)), inside) << "round " << round << " at " << x << "," << y;
      }
  }
}

TEST(ZoneProperty, ConstraintNarrowsAndDelayWidens) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 500; ++round) {
    Zone z = Zone::zero(3);
    z.delay().constrain(1, 0, Bound::le(static_cast<int>(rng() % 6)));
    const Zone before = z;
    Zone narrowed = z;
    narrowed.constrain(2, 1, Bound::le(static_cast<int>(rng() % 5) - 2));
    EXPECT_TRUE(narrowed.is_subset_of(before));
    Zone delayed = before;
    delayed.delay();
    EXPECT_TRUE(before.is_subset_of(delayed));
    EXPECT_TRUE(delayed.is_canonical());
  }
}

}  // namespace
}  // namespace dtcv
