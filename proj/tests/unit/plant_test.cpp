#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dtcv/error.hpp"
#include "dtcv/plant.hpp"
#include "dtcv/stabilize.hpp"

namespace dtcv {
namespace {

TEST(Plant, InitialRowIsWarmStart) {
  PlantParams p;
  const Trace tr = run(p, 1);
  ASSERT_EQ(tr.size(), 1u);
  const auto& r = tr.rows[0];
  EXPECT_EQ(r[Signal::t], 0);
  EXPECT_EQ(r[Signal::B_T], 2000 + 12500);
  EXPECT_EQ(r[Signal::Bo_T], 2000);
  EXPECT_EQ(r[Signal::W_M], 8000);
  EXPECT_EQ(r[Signal::Wo_M], 8000);
  EXPECT_EQ(r[Signal::burner_on], 1);
  EXPECT_EQ(r[Signal::W_A] + r[Signal::Wo_A] + r[Signal::Wo_R] + r[Signal::Wo_D] + r[Signal::critical_alarm], 0);
  EXPECT_THROW(run(p, 0), ModelError);
}

TEST(Plant, FirstStepsByHand) {
  PlantParams p;  // B_eq = 14500, boiler target 12000, beta 0.05
  const Trace tr = run(p, 4);
  EXPECT_EQ(tr.rows[1][Signal::Bo_T], 2000 + 500);
  EXPECT_EQ(tr.rows[2][Signal::Bo_T], 2500 + 475);
  EXPECT_EQ(tr.rows[3][Signal::Bo_T], 2975 + 451);  // 0.05 * 9025 = 451.25
  EXPECT_EQ(tr.rows[3][Signal::Wo_M], 8000 - 30);
  EXPECT_EQ(tr.rows[3][Signal::W_M], 8000);
  EXPECT_EQ(tr.rows[3][Signal::B_T], 14500);
}

TEST(Plant, CoolingByHand) {
  PlantParams p;
  PlantState s = initial_state(p);
  s.burner_on = false;
  s.B_T = 9000;
  s.Bo_T = 8000;
  s.history.clear();
  const PlantState a = step(s, p);
  // Boiler: 0.02 * 6000 = 120. Burner above boiling also sheds 0.2 * 1000.
  EXPECT_EQ(a.Bo_T, 7880);
  EXPECT_EQ(a.B_T, 9000 - 120 - 200);
  PlantState b = a;
  b.B_T = 8050;
  const PlantState c = step(b, p);
  // Surplus would take it to 7898; below boiling it moves in lockstep with the boiler.
  EXPECT_EQ(c.Bo_T, 7880 - 118);
  EXPECT_EQ(c.B_T, 8050 - 118);
  const PlantState d = step(c, p);
  EXPECT_EQ(d.Bo_T - c.Bo_T, d.B_T - c.B_T);
}

TEST(Plant, BurnerOffCoolsStrictlyButNeverBelowAmbient) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const PlantParams p = random_scenario(seed);
    PlantState s = initial_state(p);
    s.forced_off = true;
    for (int k = 0; k < 15000; ++k) {
      const PlantState n = step(s, p);
      if (!s.burner_on) {
        if (s.B_T > p.T_env) ASSERT_LT(n.B_T, s.B_T) << "seed " << seed << " step " << k;
        ASSERT_GE(n.B_T, p.T_env);
        ASSERT_GE(n.Bo_T, p.T_env);
        ASSERT_LE(n.Bo_T, s.Bo_T);
      }
      s = n;
    }
    EXPECT_EQ(s.B_T, p.T_env) << seed;
  }
}

TEST(Plant, QualitativeLaws) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const PlantParams p = random_scenario(seed);
    const Trace tr = run(p, 1500);
    for (std::size_t k = 1; k < tr.size(); ++k) {
      const auto& a = tr.rows[k - 1];
      const auto& b = tr.rows[k];
      ASSERT_LE(b[Signal::W_M], a[Signal::W_M]);
      if (a[Signal::Bo_T] > p.T_Boil && a[Signal::W_M] > 0) ASSERT_LT(b[Signal::W_M], a[Signal::W_M]);
      const std::int64_t delivered = b[Signal::Wo_D] ? p.delivery_size : 0;
      const std::int64_t burnt = a[Signal::burner_on] ? std::min(a[Signal::Wo_M], p.burn_rate * p.period) : 0;
      ASSERT_EQ(b[Signal::Wo_M], a[Signal::Wo_M] - burnt + delivered) << "seed " << seed << " row " << k;
      if (a[Signal::burner_on] && !b[Signal::Wo_D]) ASSERT_LT(b[Signal::Wo_M], a[Signal::Wo_M]);
      ASSERT_GE(b[Signal::B_T], p.T_env);
      ASSERT_GE(b[Signal::Bo_T], p.T_env);
      if (b[Signal::W_M] > 0) ASSERT_LE(b[Signal::Bo_T], p.T_Boil + 25);
      if (!a[Signal::burner_on]) ASSERT_EQ(b[Signal::burner_on], 0);
    }
  }
}

TEST(Plant, FlagsFollowStabilizedLevels) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PlantParams p = random_scenario(seed);
    const Trace tr = run(p, 1500);
    const auto wo = stabilize(tr.series(Signal::Wo_M), p.window);
    const auto w = stabilize(tr.series(Signal::W_M), p.window);
    for (std::size_t t = 0; t < static_cast<std::size_t>(p.window); ++t) {
      EXPECT_EQ(tr.rows[t][Signal::Wo_R], 0);
      EXPECT_EQ(tr.rows[t][Signal::W_A], 0);
    }
    for (std::size_t t = wo.first(); t < tr.size(); ++t) {
      ASSERT_EQ(tr.rows[t][Signal::Wo_R], wo.at(t) < p.Wo_min ? 1 : 0) << "seed " << seed << " row " << t;
      if (w.at(t) < p.W_min) ASSERT_EQ(tr.rows[t][Signal::W_A], 1);
      if (tr.rows[t][Signal::W_A]) ASSERT_EQ(tr.rows[t][Signal::burner_on], 0);
    }
  }
}

TEST(Plant, DeliveryArrivesAfterLatency) {
  PlantParams p;
  p.initial_wood = p.Wo_min + 200;
  const Trace tr = run(p, 200);
  std::optional<std::size_t> request, delivery;
  for (std::size_t t = 0; t < tr.size(); ++t) {
    if (!request && tr.rows[t][Signal::Wo_R]) request = t;
    if (!delivery && tr.rows[t][Signal::Wo_D]) delivery = t;
  }
  ASSERT_TRUE(request && delivery);
  EXPECT_EQ(*delivery - *request, 30u);
  EXPECT_EQ(tr.rows[*delivery][Signal::Wo_M] - tr.rows[*delivery - 1][Signal::Wo_M], p.delivery_size - p.burn_rate);
}

TEST(Plant, SuppressedDeliveryRaisesWaterAlarmAfterWait) {
  PlantParams p;
  p.deliveries_enabled = false;
  p.initial_wood = p.Wo_min + 200;
  p.initial_water = 50000;
  const Trace tr = run(p, 300);
  std::optional<std::size_t> request, alarm, off;
  for (std::size_t t = 0; t < tr.size(); ++t) {
    if (!request && tr.rows[t][Signal::Wo_R]) request = t;
    if (!alarm && tr.rows[t][Signal::W_A]) alarm = t;
    if (!off && !tr.rows[t][Signal::burner_on]) off = t;
  }
  ASSERT_TRUE(request && alarm && off);
  EXPECT_EQ(*alarm - *request, 60u);
  EXPECT_EQ(*off, *alarm);
  EXPECT_EQ(tr.rows[*alarm][Signal::Wo_A], 1);
  EXPECT_EQ(tr.rows[*alarm][Signal::Wo_D], 0);
}

TEST(Plant, CriticalAlarmOnlyAfterIdealRange) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PlantParams p = random_scenario(seed);
    const Trace tr = run(p, 1500);
    const auto b = stabilize(tr.series(Signal::B_T), p.window);
    bool reached = false;
    for (std::size_t t = b.first(); t < tr.size(); ++t) {
      const bool in = b.at(t) >= p.ideal_lo && b.at(t) <= p.ideal_hi;
      reached = reached || in;
      ASSERT_EQ(tr.rows[t][Signal::critical_alarm], reached && !in ? 1 : 0);
    }
  }
}

TEST(Plant, RunIsDeterministic) {
  const PlantParams p = random_scenario(42);
  EXPECT_EQ(run(p, 700), run(p, 700));
  EXPECT_EQ(run(p, 700, 1), run(p, 700, 2));
}

TEST(Scenario, SameSeedSameParameters) {
  EXPECT_EQ(random_scenario(9), random_scenario(9));
  std::set<std::int64_t> distinct;
  for (std::uint64_t s = 0; s < 50; ++s) distinct.insert(random_scenario(s).T_Boil);
  EXPECT_GT(distinct.size(), 40u);
}

TEST(Scenario, DocumentedRanges) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const PlantParams p = random_scenario(seed);
    EXPECT_NO_THROW(validate(p));
    EXPECT_GE(p.burn_rate, 5);
    EXPECT_LE(p.burn_rate, 20);
    EXPECT_GE(p.T_env, 1000);
    EXPECT_LE(p.T_env, 3000);
    EXPECT_GE(p.T_Boil, 7000);
    EXPECT_LE(p.T_Boil, 9000);
    EXPECT_GE(p.delta, 2000);
    EXPECT_LE(p.delta, 3500);
    EXPECT_GE(p.beta, 0.02);
    EXPECT_LE(p.beta, 0.1);
    EXPECT_GE(p.cooling_rate, 0.01);
    EXPECT_LE(p.cooling_rate, 0.03);
    EXPECT_GE(p.burner_cooling, 0.1);
    EXPECT_LE(p.burner_cooling, 0.3);
    EXPECT_GE(p.liquid_heat_rate, 10);
    EXPECT_LE(p.liquid_heat_rate, 30);
    const auto eq = burner_equilibrium(p);
    EXPECT_GE(eq, 13500);
    EXPECT_LE(eq, 15500);
    EXPECT_GE(p.Wo_min, 2000);
    EXPECT_LE(p.Wo_min, 4000);
    EXPECT_GE(p.initial_wood - p.Wo_min, 2000);
    EXPECT_LE(p.initial_wood - p.Wo_min, 8000);
    EXPECT_GE(p.delivery_size, 3000);
    EXPECT_LE(p.delivery_size, 6000);
    EXPECT_GE(p.W_min, 1000);
    EXPECT_LE(p.W_min, 3000);
    EXPECT_GE(p.initial_water - p.W_min, 3000);
    EXPECT_LE(p.initial_water - p.W_min, 9000);
    EXPECT_TRUE(p.deliveries_enabled);
  }
}

TEST(Plant, ValidationRejectsNonsense) {
  PlantParams p;
  p.T_Boil = p.T_env;
  EXPECT_THROW(validate(p), ModelError);
  p = PlantParams{};
  p.cooling_rate = 1.5;
  EXPECT_THROW(validate(p), ModelError);
  p = PlantParams{};
  p.window = 0;
  EXPECT_THROW(initial_state(p), ModelError);
}

}  // namespace
}  // namespace dtcv
