#include "traces.hpp"

#include <algorithm>

namespace dtcv::testing {

namespace {

std::int64_t uni(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<std::int64_t> walk(std::mt19937_64& rng, std::size_t n, std::int64_t start,
                               std::int64_t max_step) {
  std::vector<std::int64_t> out(n);
  std::int64_t x = start;
  std::int64_t slope = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (coin(rng, 0.1)) slope = coin(rng, 0.3) ? 0 : uni(rng, -max_step, max_step);
    x = std::max<std::int64_t>(0, x + slope + uni(rng, -max_step / 4, max_step / 4));
    out[k] = x;
  }
  return out;
}

std::vector<std::int64_t> flags(std::mt19937_64& rng, std::size_t n, double flip) {
  std::vector<std::int64_t> out(n);
  std::int64_t b = coin(rng, 0.5);
  for (std::size_t k = 0; k < n; ++k) {
    if (coin(rng, flip)) b = 1 - b;
    out[k] = b;
  }
  return out;
}

}  // namespace

ContractParams random_contract_params(std::mt19937_64& rng) {
  ContractParams p;
  p.m = static_cast<int>(uni(rng, 1, 4));
  p.epsilon = uni(rng, 20, 80);
  p.lag = uni(rng, 0, 3);
  p.period = uni(rng, 1, 2);
  p.T_Boil = 8000;
  p.Wo_min = 3000;
  p.W_min = 2000;
  p.ideal_lo = 13000;
  p.ideal_hi = 16000;
  p.wood_wait = uni(rng, 0, 20);
  p.alarm_hold = uni(rng, 0, 30);
  return p;
}

Trace random_contract_trace(std::mt19937_64& rng, const ContractParams& p, std::size_t max_rows) {
  const auto n = static_cast<std::size_t>(uni(rng, p.m + 1, static_cast<std::int64_t>(max_rows)));
  Trace tr = make_trace(n, p.period, true);
  const auto B = walk(rng, n, uni(rng, 7000, 16500), 300);
  const auto Bo = walk(rng, n, uni(rng, 7500, 8500), 120);
  const auto W = walk(rng, n, uni(rng, 1500, 2500), 100);
  const auto Wo = walk(rng, n, uni(rng, 2500, 3500), 100);
  const double flip = coin(rng, 0.5) ? 0.02 : 0.15;
  const auto burner = flags(rng, n, flip);
  const auto alarm = flags(rng, n, flip);
  const auto WA = flags(rng, n, flip), WoA = flags(rng, n, flip), WoR = flags(rng, n, flip),
             WoD = flags(rng, n, flip);
  const std::int64_t env = uni(rng, 1000, 9000);
  for (std::size_t k = 0; k < n; ++k) {
    auto& r = tr.rows[k];
    r[Signal::t] = static_cast<std::int64_t>(k) * p.period;
    r[Signal::B_T] = B[k];
    r[Signal::Bo_T] = Bo[k];
    r[Signal::W_M] = W[k];
    r[Signal::Wo_M] = Wo[k];
    r[Signal::burner_on] = burner[k];
    r[Signal::critical_alarm] = alarm[k];
    r[Signal::W_A] = WA[k];
    r[Signal::Wo_A] = WoA[k];
    r[Signal::Wo_R] = WoR[k];
    r[Signal::Wo_D] = WoD[k];
    r[Signal::T_env] = env;
  }
  const double corrupt = coin(rng, 0.3) ? 0.0 : (coin(rng, 0.5) ? 0.02 : 0.2);
  for (std::size_t k = 0; k < n; ++k) {
    auto& r = tr.rows[k];
    for (const Signal ps : predicted_signals()) {
      const Signal ts = truth_of(ps);
      std::int64_t v = r[ts];
      if (coin(rng, corrupt)) v = is_boolean(ps) ? 1 - v : std::max<std::int64_t>(0, v + uni(rng, -600, 600));
      r[ps] = v;
    }
  }
  return tr;
}

Trace trace_from_columns(const std::vector<std::pair<Signal, std::vector<std::int64_t>>>& cols,
                         std::int64_t period) {
  std::size_t n = 0;
  for (const auto& [s, v] : cols) n = std::max(n, v.size());
  Trace tr = make_trace(n, period, true);
  for (std::size_t k = 0; k < n; ++k) {
    tr.rows[k][Signal::t] = static_cast<std::int64_t>(k) * period;
    for (const auto& [s, v] : cols) tr.rows[k][s] = k < v.size() ? v[k] : v.back();
  }
  return tr;
}

}  // namespace dtcv::testing
