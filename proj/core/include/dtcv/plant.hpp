#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "dtcv/trace.hpp"

namespace dtcv {

/// Temperatures in centi-degC, masses in centi-kg, time in seconds.
struct PlantParams {
  std::int64_t burn_rate = 10;         // wood burnt per second while on
  double alpha = 1250.0;               // burner equilibrium: T_env + alpha * burn_rate
  double beta = 0.05;                  // boiler relaxation coefficient
  std::int64_t delta = 2500;           // burner-to-boiler temperature drop
  std::int64_t liquid_heat_rate = 20;  // evaporation per second above T_Boil
  std::int64_t T_Boil = 8000;
  std::int64_t T_env = 2000;
  std::int64_t initial_wood = 8000;
  std::int64_t initial_water = 8000;
  std::int64_t delivery_size = 4000;
  std::int64_t Wo_min = 3000;
  std::int64_t W_min = 2000;
  double cooling_rate = 0.02;          // boiler loss to the environment while off
  double burner_cooling = 0.2;         // burner loss towards the boiler while off and above T_Boil
  std::int64_t delivery_latency = 30;
  bool deliveries_enabled = true;
  std::int64_t period = 1;
  /// Controller settings.
  int window = 3;
  std::int64_t wood_wait = 60;
  std::int64_t alarm_hold = 300;
  std::int64_t ideal_lo = 13000;
  std::int64_t ideal_hi = 16000;

  friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

/// Burner temperature while burning.
std::int64_t burner_equilibrium(const PlantParams& p);

/// Throws ModelError on inconsistent parameters.
void validate(const PlantParams& p);

struct PlantState {
  std::int64_t t = 0;
  std::int64_t B_T = 0;
  std::int64_t Bo_T = 0;
  std::int64_t W_M = 0;
  std::int64_t Wo_M = 0;
  bool burner_on = true;
  bool W_A = false;
  bool Wo_A = false;
  bool Wo_R = false;
  bool Wo_D = false;
  bool critical_alarm = false;
  bool reached_ideal = false;
  bool reached_boiling = false;
  std::optional<std::int64_t> delivery_due;  // step at which the pending delivery arrives
  std::optional<std::int64_t> wait_since;    // request start, while waiting for wood
  bool starved = false;
  std::optional<std::int64_t> alarm_since;
  bool alarm_expired = false;
  bool forced_off = false;
  /// Last `window` raw values of B_T, Bo_T, W_M, Wo_M, oldest first.
  std::deque<std::array<std::int64_t, 4>> history;

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

PlantState initial_state(const PlantParams& p);

/// One period of dynamics followed by the controller.
PlantState step(const PlantState& s, const PlantParams& p);

/// Truth columns of a state.
TraceRow observe(const PlantState& s, const PlantParams& p);

PlantParams random_scenario(std::uint64_t seed);

/// horizon rows. The seed is accepted for interface symmetry; the dynamics are deterministic.
Trace run(const PlantParams& p, std::int64_t horizon, std::uint64_t seed = 0);

}  // namespace dtcv
