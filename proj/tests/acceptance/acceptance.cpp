// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "dtcv/contracts.hpp"
#include "dtcv/error.hpp"
#include "dtcv/pipeline.hpp"
#include "dtcv/plant.hpp"
#include "dtcv/stabilize.hpp"
#include "dtcv/twin.hpp"
#include "dtcv/verifier.hpp"
#include "networks.hpp"
#include "traces.hpp"

namespace {

using namespace dtcv;
using Clock = std::chrono::steady_clock;

// Tolerances and sample sizes.
constexpr double kLampBudgetMs = 1000.0;
constexpr int kDualityNetworks = 150;
constexpr int kOracleNetworks = 300;
constexpr std::int64_t kOracleMaxHorizon = 20;
constexpr int kContractTraces = 1000;
constexpr std::size_t kContractTraceRows = 200;
constexpr int kPlantScenarios = 100;
constexpr std::int64_t kPlantHorizon = 1200;
constexpr int kStabilizeSeries = 10000;
constexpr int kMonotonePairs = 10000;

struct Result {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int n, const char* name, const std::function<Result()>& body) {
  const auto start = Clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (!r.pass) ++failures;
  std::printf("%s %2d %s (%s; %.0f ms)\n", r.pass ? "PASS" : "FAIL", n, name, r.detail.c_str(), ms);
  std::fflush(stdout);
}

Result lamp() {
  const auto start = Clock::now();
  const Network fast = build_network(testing::lamp_spec(false));
  const Verdict v = check(fast, parse_query("E<> Lamp.bright", fast));
  const Network slow = build_network(testing::lamp_spec(true));
  const Verdict vs = check(slow, parse_query("E<> Lamp.bright", slow));
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  int presses = 0;
  if (v.evidence)
    for (const auto& s : v.evidence->steps)
      if (s.action.find("press") != std::string::npos) ++presses;
  std::ostringstream d;
  d << "fast=" << v.satisfied << " presses=" << presses << " slow=" << vs.satisfied;
  return {v.satisfied && presses == 2 && !vs.satisfied && ms < kLampBudgetMs, d.str()};
}

/// First row after shutdown where the boiler temperature is below boiling.
std::optional<std::int64_t> boil_crossing(const Trace& tr, const PlantParams& p) {
  bool off = false;
  for (std::size_t k = 1; k < tr.size(); ++k) {
    if (!tr.rows[k][Signal::burner_on]) off = true;
    if (off && tr.rows[k][Signal::B_T] < p.T_Boil &&
        tr.rows[k - 1][Signal::B_T] - tr.rows[k][Signal::B_T] > 2 * ContractParams{}.epsilon)
      return static_cast<std::int64_t>(k);
  }
  return std::nullopt;
}

Result mc1_reproduction() {
  for (std::uint64_t seed = 1; seed < 50; ++seed) {
    const PlantParams p = random_scenario(seed);
    const Trace clean = rollout(*perfect_twin(), p, 1500);
    const auto cross = boil_crossing(clean, p);
    if (!cross) continue;
    FaultSpec f;
    f.kind = FaultKind::StuckOutput;
    f.signal = Signal::pred_Bo_T;
    f.t_from = *cross - 10;
    f.t_to = *cross + 30;
    const Trace faulty = rollout(*inject_fault(perfect_twin(), f), p, *cross + 60);
    const ContractParams cp = params_for(p);
    const auto bad = verify_contract(build_contract(ContractId::MC1, faulty, cp), faulty);
    const auto good = verify_contract(build_contract(ContractId::MC1, clean, cp), clean);
    const auto row = bad.first_violation_row();
    std::ostringstream d;
    d << "seed=" << seed << " window=[" << f.t_from << "," << f.t_to << "] row="
      << (row ? std::to_string(*row) : "none") << " clean=" << good.satisfied;
    const bool in_window = row && *row >= f.t_from && *row <= f.t_to;
    return {!bad.satisfied && in_window && good.satisfied, d.str()};
  }
  return {false, "no scenario cools below boiling"};
}

/// Longest stretch where the stabilized level stays strictly above `threshold`, clipped to 100 rows.
std::pair<std::int64_t, std::int64_t> window_above(const Trace& tr, Signal s, std::int64_t threshold, int m) {
  const auto st = stabilize(tr.series(s), m);
  std::int64_t best_from = 0, best_len = 0, from = -1;
  for (std::size_t t = st.first(); t < tr.size(); ++t) {
    if (st.at(t) > threshold) {
      if (from < 0) from = static_cast<std::int64_t>(t);
      const std::int64_t len = static_cast<std::int64_t>(t) - from + 1;
      if (len > best_len) best_from = from, best_len = len;
    } else {
      from = -1;
    }
  }
  return {best_from + 5, best_from + std::min<std::int64_t>(best_len, 100) - 5};
}

Result noise_reproduction(ContractId id, Signal pred, Signal level, bool check_dual) {
  const std::uint64_t seed = 7;
  const PlantParams p = random_scenario(seed);
  const ContractParams cp = params_for(p);
  const std::int64_t horizon = 400;
  const Trace clean = rollout(*perfect_twin(), p, horizon);
  const std::int64_t threshold = level == Signal::Wo_M ? cp.Wo_min : cp.W_min;
  const auto [from, to] = window_above(clean, level, threshold, cp.m);
  if (to - from < 20) return {false, "no window above the minimum"};
  FaultSpec f;
  f.kind = FaultKind::AdditiveNoise;
  f.signal = pred;
  f.amplitude = 0.9;
  f.seed = 42;
  f.t_from = from;
  f.t_to = to;
  const Trace faulty = rollout(*inject_fault(perfect_twin(), f), p, horizon);
  const auto bad = verify_contract(build_contract(id, faulty, cp), faulty);
  const auto good = verify_contract(build_contract(id, clean, cp), clean);
  bool dual_ok = true;
  if (check_dual) {
    dual_ok = false;
    for (const auto& o : bad.outcomes)
      if (o.kind == QueryKind::Reachability && o.satisfied && o.evidence) dual_ok = true;
  }
  const auto row = bad.first_violation_row();
  std::ostringstream d;
  d << "window=[" << from << "," << to << "] row=" << (row ? std::to_string(*row) : "none")
    << " clean=" << good.satisfied << (check_dual ? std::string(" dual=") + (dual_ok ? "1" : "0") : "");
  return {!bad.satisfied && row && *row >= from && dual_ok && good.satisfied, d.str()};
}

Result duality() {
  std::mt19937_64 rng(0xd0a1);
  int agree = 0;
  for (int k = 0; k < kDualityNetworks; ++k) {
    const auto rn = testing::random_network(rng);
    const Network net = build_network(rn.spec);
    CheckLimits limits;
    if (k % 2) limits.horizon = static_cast<std::int64_t>(rng() % 21);
    if (check_duality(net, bind_predicate(net, rn.predicate), limits)) ++agree;
  }
  return {agree == kDualityNetworks, std::to_string(agree) + "/" + std::to_string(kDualityNetworks)};
}

Result oracle_agreement() {
  std::mt19937_64 rng(0x0c1e);
  int agree = 0, total = 0, satisfied = 0;
  std::string first_bad;
  for (int k = 0; k < kOracleNetworks; ++k) {
    const auto rn = testing::random_network(rng);
    const Network net = build_network(rn.spec);
    const auto horizon = static_cast<std::int64_t>(rng() % (kOracleMaxHorizon + 1));
    for (const char* kind : {"A[] ", "E<> "}) {
      const Query q = parse_query(std::string(kind) + rn.predicate, net);
      CheckLimits limits;
      limits.horizon = horizon;
      const bool zone = check(net, q, limits).satisfied;
      const bool brute = explicit_oracle(net, q, horizon).satisfied;
      ++total;
      if (zone) ++satisfied;
      if (zone == brute)
        ++agree;
      else if (first_bad.empty())
        first_bad = " first mismatch: network " + std::to_string(k) + " " + q.text;
    }
  }
  return {agree == total,
          std::to_string(agree) + "/" + std::to_string(total) + " agree, " + std::to_string(satisfied) +
              " satisfied" + first_bad};
}

Result contract_oracle_agreement() {
  std::mt19937_64 rng(0xc0de);
  long agree = 0, total = 0, violated = 0;
  std::string first_bad;
  CheckLimits limits;
  limits.max_states = 2'000'000;
  for (int k = 0; k < kContractTraces; ++k) {
    const ContractParams p = testing::random_contract_params(rng);
    const Trace tr = testing::random_contract_trace(rng, p, kContractTraceRows);
    for (const ContractId id : all_contracts()) {
      const auto v = verify_contract(build_contract(id, tr, p), tr, limits, false);
      const auto o = direct_oracle(id, tr, p);
      const std::optional<std::int64_t> orow = o.empty() ? std::nullopt : std::optional(o.front().row);
      ++total;
      if (!v.satisfied) ++violated;
      if (!v.inconclusive && v.satisfied == o.empty() && v.first_violation_row() == orow)
        ++agree;
      else if (first_bad.empty())
        first_bad = " first mismatch: trace " + std::to_string(k) + " " + std::string(contract_name(id));
    }
  }
  return {agree == total,
          std::to_string(agree) + "/" + std::to_string(total) + " agree, " + std::to_string(violated) +
              " violated" + first_bad};
}

Result plant_compliance() {
  long violations = 0, inconclusive = 0;
  std::string first_bad;
  for (int k = 1; k <= kPlantScenarios; ++k) {
    const PlantParams p = random_scenario(static_cast<std::uint64_t>(k));
    const Trace tr = rollout(*perfect_twin(), p, kPlantHorizon);
    const Report r = verify_trace(tr, all_contracts(), params_for(p), {}, true);
    for (const auto& c : r.contracts) {
      if (c.verdict.inconclusive) ++inconclusive;
      if (!c.verdict.satisfied) {
        ++violations;
        if (first_bad.empty())
          first_bad = " first: scenario " + std::to_string(k) + " " + std::string(contract_name(c.verdict.id));
      }
    }
  }
  return {violations == 0 && inconclusive == 0,
          std::to_string(violations) + " violations, " + std::to_string(inconclusive) + " inconclusive" +
              first_bad};
}

Result stabilization() {
  std::mt19937_64 rng(0x57ab);
  int bad = 0;
  for (int k = 0; k < kStabilizeSeries; ++k) {
    const int m = static_cast<int>(rng() % 6) + 1;
    const std::size_t n = m + 1 + rng() % 40;
    std::vector<std::int64_t> x(n);
    for (auto& v : x) v = static_cast<std::int64_t>(rng() % 200001) - 100000;
    const auto s = stabilize(x, m);
    for (std::size_t t = s.first(); t < n; ++t) {
      const auto lo = *std::min_element(x.begin() + (t - m), x.begin() + t);
      const auto hi = *std::max_element(x.begin() + (t - m), x.begin() + t);
      if (s.at(t) < lo || s.at(t) > hi) ++bad;
    }
    const std::int64_t c = x[0];
    const std::vector<std::int64_t> flat(n, c);
    const auto sf = stabilize(flat, m);
    for (std::size_t t = sf.first(); t < n; ++t)
      if (sf.at(t) != c) ++bad;
    const auto s1 = stabilize(x, 1);
    for (std::size_t t = 1; t < n; ++t)
      if (s1.at(t) != x[t - 1]) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " property failures over " + std::to_string(kStabilizeSeries) + " series"};
}

Result monotonicity() {
  std::mt19937_64 rng(0x3e3);
  std::uniform_real_distribution<double> base(0.0, 20000.0), bump(0.0, 2000.0);
  const auto mono = monotone_surrogate(11);
  const auto anti = anti_monotone_surrogate(11);
  int mono_fail = 0, anti_fail = 0;
  for (int k = 0; k < kMonotonePairs; ++k) {
    std::vector<double> x(kFeatureCount), y(kFeatureCount);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = base(rng);
      y[i] = x[i] + (rng() % 3 ? bump(rng) : 0.0);
    }
    const auto a = mono->predict_features(x), b = mono->predict_features(y);
    if (!componentwise_leq(a, b)) ++mono_fail;
    const auto c = anti->predict_features(x), d = anti->predict_features(y);
    if (!componentwise_leq(c, d)) ++anti_fail;
  }
  return {mono_fail == 0 && anti_fail > 0,
          "monotone failures=" + std::to_string(mono_fail) + " anti-monotone failures=" + std::to_string(anti_fail)};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  report(1, "lamp golden test", lamp);
  report(2, "MC1 stuck boiler prediction", mc1_reproduction);
  report(3, "FC3 noisy wood request", [] {
    return noise_reproduction(ContractId::FC3, Signal::pred_Wo_R, Signal::Wo_M, false);
  });
  report(4, "FC9 noisy water alarm", [] {
    return noise_reproduction(ContractId::FC9, Signal::pred_W_A, Signal::W_M, true);
  });
  report(5, "invariance/reachability duality", duality);
  report(6, "zone checker vs explicit oracle", oracle_agreement);
  report(7, "contract automata vs direct oracle", contract_oracle_agreement);
  report(8, "fault-free plant compliance", plant_compliance);
  report(9, "stabilization properties", stabilization);
  report(10, "monotonicity brute force", monotonicity);
  const double s = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%d failed, %.1f s total\n", failures, s);
  return failures == 0 ? 0 : 1;
}
