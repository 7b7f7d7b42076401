#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dtcv/error.hpp"
#include "dtcv/stabilize.hpp"

namespace dtcv {
namespace {

TEST(Stabilize, WorkedExample) {
  const std::vector<std::int64_t> x{10, 20, 30, 40};
  const auto s = stabilize(x, 2);
  EXPECT_EQ(s.first(), 2u);
  EXPECT_EQ(s.at(2), 15);
  EXPECT_EQ(s.at(3), 25);
  EXPECT_EQ(s.values.size(), 2u);
}

TEST(Stabilize, RoundsHalfUp) {
  EXPECT_EQ(rounded_mean(3, 2), 2);
  EXPECT_EQ(rounded_mean(-3, 2), -1);
  EXPECT_EQ(rounded_mean(10, 3), 3);
  EXPECT_EQ(rounded_mean(11, 3), 4);
  EXPECT_EQ(rounded_mean(-11, 3), -4);
}

TEST(Stabilize, ConstantAndShift) {
  const std::vector<std::int64_t> c(4, 777);
  for (int m = 1; m < 4; ++m)
    for (const auto v : stabilize(c, m).values) EXPECT_EQ(v, 777);
  const std::vector<std::int64_t> x{5, -3, 8, 1};
  const auto s = stabilize(x, 1);
  for (std::size_t t = 1; t < x.size(); ++t) EXPECT_EQ(s.at(t), x[t - 1]);
}

TEST(Stabilize, Errors) {
  const std::vector<std::int64_t> x{1, 2, 3};
  EXPECT_THROW(stabilize(x, 0), Error);
  try {
    stabilize(x, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("window exceeds series"), std::string::npos);
  }
  const auto s = stabilize(x, 2);
  EXPECT_THROW(s.at(1), Error);
}

TEST(ComponentwiseLeq, Examples) {
  const std::vector<std::int64_t> a{1, 2}, b{1, 3}, c{1, 4}, d{2, 3};
  EXPECT_TRUE(componentwise_leq(a, b));
  EXPECT_FALSE(componentwise_leq(c, d));
  EXPECT_TRUE(componentwise_leq(a, a));
  const std::vector<std::int64_t> shorter{1};
  EXPECT_THROW(componentwise_leq(a, shorter), Error);
}

TEST(StabilizeProperty, MatchesFloatingMeanAndStaysInWindow) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 3000; ++round) {
    const int m = 1 + static_cast<int>(rng() % 7);
    const std::size_t n = static_cast<std::size_t>(m) + 1 + rng() % 30;
    std::vector<std::int64_t> x(n);
    for (auto& v : x) v = static_cast<std::int64_t>(rng() % 40001) - 20000;
    const auto s = stabilize(x, m);
    for (std::size_t t = s.first(); t < n; ++t) {
      double sum = 0;
      for (int i = 1; i <= m; ++i) sum += static_cast<double>(x[t - static_cast<std::size_t>(i)]);
      ASSERT_EQ(s.at(t), static_cast<std::int64_t>(std::floor(sum / m + 0.5))) << "round " << round;
    }
  }
}

TEST(StabilizeProperty, MonotoneInputGivesMonotoneOutput) {
  std::mt19937_64 rng(18);
  for (int round = 0; round < 1000; ++round) {
    const int m = 1 + static_cast<int>(rng() % 5);
    std::vector<std::int64_t> x(40);
    std::int64_t v = 0;
    for (auto& e : x) e = (v += static_cast<std::int64_t>(rng() % 50));
    const auto s = stabilize(x, m);
    for (std::size_t k = 1; k < s.values.size(); ++k) ASSERT_LE(s.values[k - 1], s.values[k]);
  }
}

TEST(ComponentwiseLeqProperty, PartialOrder) {
  std::mt19937_64 rng(19);
  auto vec = [&] {
    std::vector<std::int64_t> v(3);
    for (auto& e : v) e = static_cast<std::int64_t>(rng() % 3);
    return v;
  };
  for (int round = 0; round < 3000; ++round) {
    const auto a = vec(), b = vec(), c = vec();
    EXPECT_TRUE(componentwise_leq(a, a));
    if (componentwise_leq(a, b) && componentwise_leq(b, a)) EXPECT_EQ(a, b);
    if (componentwise_leq(a, b) && componentwise_leq(b, c)) EXPECT_TRUE(componentwise_leq(a, c));
  }
}

}  // namespace
}  // namespace dtcv
