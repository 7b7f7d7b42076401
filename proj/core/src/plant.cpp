#include "dtcv/plant.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dtcv/error.hpp"
#include "dtcv/stabilize.hpp"

namespace dtcv {

namespace {

std::int64_t round_to_int(double v) { return static_cast<std::int64_t>(std::llround(v)); }

struct Hat {
  std::int64_t B_T, Bo_T, W_M, Wo_M;
};

std::optional<Hat> hats(const PlantState& s, int window) {
  if (s.history.size() < static_cast<std::size_t>(window)) return std::nullopt;
  std::array<std::int64_t, 4> sum{};
  for (const auto& h : s.history)
    for (std::size_t k = 0; k < 4; ++k) sum[k] += h[k];
  return Hat{rounded_mean(sum[0], window), rounded_mean(sum[1], window),
             rounded_mean(sum[2], window), rounded_mean(sum[3], window)};
}

void control(PlantState& n, const PlantState& prev, const PlantParams& p) {
  const auto hat = hats(n, p.window);
  if (!hat) {
    n.burner_on = prev.burner_on && n.Wo_M > 0 && !n.forced_off;
    return;
  }
  n.Wo_R = hat->Wo_M < p.Wo_min;
  if (n.Wo_R && !prev.Wo_R && !n.delivery_due && p.deliveries_enabled)
    n.delivery_due = n.t + std::max<std::int64_t>(1, p.delivery_latency / p.period);

  if (n.Wo_D || !n.Wo_R) {
    n.wait_since.reset();
    n.starved = false;
  } else if (!n.wait_since) {
    n.wait_since = n.t;
  } else if (!n.starved && (n.t - *n.wait_since) * p.period >= p.wood_wait) {
    n.starved = true;
  }
  n.Wo_A = n.starved;
  n.W_A = hat->W_M < p.W_min || (n.starved && hat->Wo_M < p.Wo_min);

  const bool in_range = hat->B_T >= p.ideal_lo && hat->B_T <= p.ideal_hi;
  if (in_range) n.reached_ideal = true;
  n.critical_alarm = n.reached_ideal && !in_range;
  if (hat->Bo_T >= p.T_Boil) n.reached_boiling = true;

  if (!n.critical_alarm) {
    n.alarm_since.reset();
    n.alarm_expired = false;
  } else if (!n.alarm_since) {
    n.alarm_since = n.t;
  } else if ((n.t - *n.alarm_since) * p.period >= p.alarm_hold) {
    n.alarm_expired = true;
  }

  n.burner_on =
      prev.burner_on && !n.W_A && !n.alarm_expired && n.Wo_M > 0 && !n.forced_off;
}

}  // namespace

std::int64_t burner_equilibrium(const PlantParams& p) {
  return p.T_env + round_to_int(p.alpha * static_cast<double>(p.burn_rate));
}

void validate(const PlantParams& p) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ModelError(std::string("plant parameters: ") + what);
  };
  need(p.burn_rate > 0, "burn_rate must be positive");
  need(p.alpha > 0, "alpha must be positive");
  need(p.beta > 0 && p.beta <= 1, "beta must lie in (0, 1]");
  need(p.delta > 0, "delta must be positive");
  need(p.liquid_heat_rate > 0, "liquid_heat_rate must be positive");
  need(p.cooling_rate > 0 && p.cooling_rate < 1, "cooling_rate must lie in (0, 1)");
  need(p.burner_cooling > 0 && p.burner_cooling < 1, "burner_cooling must lie in (0, 1)");
  need(p.T_Boil > p.T_env, "T_Boil must exceed T_env");
  need(p.initial_wood > 0 && p.initial_water > 0, "initial masses must be positive");
  need(p.delivery_size > 0, "delivery_size must be positive");
  need(p.Wo_min > 0 && p.W_min > 0, "minimum levels must be positive");
  need(p.delivery_latency > 0, "delivery_latency must be positive");
  need(p.period > 0, "period must be positive");
  need(p.window >= 1, "window must be at least 1");
  need(p.wood_wait >= 0 && p.alarm_hold >= 0, "timers must be non-negative");
  need(p.ideal_lo < p.ideal_hi, "ideal range is empty");
}

PlantState initial_state(const PlantParams& p) {
  validate(p);
  PlantState s;
  s.B_T = burner_equilibrium(p);
  s.Bo_T = p.T_env;
  s.W_M = p.initial_water;
  s.Wo_M = p.initial_wood;
  s.burner_on = true;
  return s;
}

PlantState step(const PlantState& s, const PlantParams& p) {
  PlantState n = s;
  n.t = s.t + 1;
  n.history.push_back({s.B_T, s.Bo_T, s.W_M, s.Wo_M});
  while (n.history.size() > static_cast<std::size_t>(p.window)) n.history.pop_front();

  if (s.burner_on) {
    n.Wo_M = std::max<std::int64_t>(0, s.Wo_M - p.burn_rate * p.period);
    n.B_T = burner_equilibrium(p);
    const std::int64_t target = std::max(p.T_env, n.B_T - p.delta);
    if (target < s.Bo_T) {
      n.Bo_T = target;
    } else {
      std::int64_t bo = s.Bo_T + round_to_int(p.beta * static_cast<double>(target - s.Bo_T));
      if (s.W_M > 0) bo = std::min(bo, p.T_Boil + 25);
      n.Bo_T = std::max(s.Bo_T, bo);
    }
  } else {
    // The boiler loses heat to the environment; the burner follows it, shedding its
    // surplus quickly while above boiling and in lockstep below.
    const std::int64_t d = round_to_int(p.cooling_rate * static_cast<double>(std::max<std::int64_t>(0, s.Bo_T - p.T_env)));
    n.Bo_T = s.Bo_T - d;
    const std::int64_t lockstep = s.B_T - std::max<std::int64_t>(d, 1);
    if (s.B_T >= p.T_Boil) {
      const std::int64_t surplus = round_to_int(p.burner_cooling * static_cast<double>(std::max<std::int64_t>(0, s.B_T - s.Bo_T)));
      n.B_T = s.B_T - d - surplus;
      if (n.B_T < p.T_Boil) n.B_T = std::min(lockstep, p.T_Boil - 1);
    } else {
      n.B_T = lockstep;
    }
    n.B_T = std::max(n.B_T, p.T_env);
  }
  if (s.Bo_T > p.T_Boil)
    n.W_M = std::max<std::int64_t>(0, s.W_M - p.liquid_heat_rate * p.period);

  n.Wo_D = false;
  if (n.delivery_due && *n.delivery_due == n.t) {
    n.Wo_M += p.delivery_size;
    n.Wo_D = true;
    n.delivery_due.reset();
  }
  control(n, s, p);
  return n;
}

TraceRow observe(const PlantState& s, const PlantParams& p) {
  TraceRow r;
  r[Signal::t] = s.t * p.period;
  r[Signal::B_T] = s.B_T;
  r[Signal::Bo_T] = s.Bo_T;
  r[Signal::W_M] = s.W_M;
  r[Signal::Wo_M] = s.Wo_M;
  r[Signal::W_A] = s.W_A;
  r[Signal::Wo_A] = s.Wo_A;
  r[Signal::Wo_R] = s.Wo_R;
  r[Signal::Wo_D] = s.Wo_D;
  r[Signal::burner_on] = s.burner_on;
  r[Signal::critical_alarm] = s.critical_alarm;
  r[Signal::T_env] = p.T_env;
  return r;
}

PlantParams random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  auto real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  PlantParams p;
  p.burn_rate = uni(5, 20);
  p.T_env = uni(1000, 3000);
  p.T_Boil = uni(7000, 9000);
  p.delta = uni(2000, 3500);
  p.beta = real(0.02, 0.1);
  p.cooling_rate = real(0.01, 0.03);
  p.liquid_heat_rate = uni(10, 30);
  const std::int64_t equilibrium = uni(13500, 15500);
  p.alpha = static_cast<double>(equilibrium - p.T_env) / static_cast<double>(p.burn_rate);
  p.Wo_min = uni(2000, 4000);
  p.delivery_size = uni(3000, 6000);
  p.initial_wood = p.Wo_min + uni(2000, 8000);
  p.W_min = uni(1000, 3000);
  p.initial_water = p.W_min + uni(3000, 9000);
  p.burner_cooling = real(0.1, 0.3);
  return p;
}

Trace run(const PlantParams& p, std::int64_t horizon, std::uint64_t /*seed*/) {
  if (horizon < 1) throw ModelError("horizon must be at least 1");
  Trace trace = make_trace(0, p.period);
  trace.rows.reserve(static_cast<std::size_t>(horizon));
  PlantState s = initial_state(p);
  trace.rows.push_back(observe(s, p));
  for (std::int64_t k = 1; k < horizon; ++k) {
    s = step(s, p);
    trace.rows.push_back(observe(s, p));
  }
  return trace;
}

}  // namespace dtcv
